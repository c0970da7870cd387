#include "qattack/qattack.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "qattack/attacks.hpp"
#include "qattack/datasets.hpp"
#include "qattack/detect.hpp"
#include "qattack/error.hpp"
#include "qattack/ga.hpp"
#include "qattack/harness.hpp"
#include "qattack/metrics.hpp"

using namespace qattack;

struct qa_graph {
  std::shared_ptr<const Graph> g;
};
struct qa_partition {
  Partition p;
};
struct qa_network {
  io::LabeledNetwork net;
  qa_graph graph;
  std::unique_ptr<qa_partition> truth;
};
struct qa_plan {
  RewiringPlan plan;
};
struct qa_detector {
  detect::DetectorSpec spec;
  std::unique_ptr<detect::Detector> custom;
  std::unique_ptr<detect::Detector> built() const {
    return detect::make_detector(spec);
  }
};
struct qa_ga_result {
  ga::QAttackResult r;
  qa_plan plan;
};
struct qa_buffer {
  std::string text;
};

namespace {

thread_local std::string g_error;

qa_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return QA_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return QA_ERR_CONFIG;
    case ErrorCode::Infeasible: return QA_ERR_INFEASIBLE;
    case ErrorCode::Parse: return QA_ERR_PARSE;
    case ErrorCode::Io: return QA_ERR_IO;
    case ErrorCode::UndefinedMetric: return QA_ERR_UNDEFINED_METRIC;
    case ErrorCode::Convergence: return QA_ERR_CONVERGENCE;
    case ErrorCode::Checksum: return QA_ERR_CHECKSUM;
    case ErrorCode::Budget: return QA_ERR_BUDGET;
    case ErrorCode::Internal: return QA_ERR_INTERNAL;
  }
  return QA_ERR_INTERNAL;
}

ErrorCode to_code(qa_status s) {
  switch (s) {
    case QA_ERR_INVALID_ARGUMENT: return ErrorCode::InvalidArgument;
    case QA_ERR_CONFIG: return ErrorCode::Config;
    case QA_ERR_INFEASIBLE: return ErrorCode::Infeasible;
    case QA_ERR_PARSE: return ErrorCode::Parse;
    case QA_ERR_IO: return ErrorCode::Io;
    case QA_ERR_UNDEFINED_METRIC: return ErrorCode::UndefinedMetric;
    case QA_ERR_CONVERGENCE: return ErrorCode::Convergence;
    case QA_ERR_CHECKSUM: return ErrorCode::Checksum;
    case QA_ERR_BUDGET: return ErrorCode::Budget;
    default: return ErrorCode::Internal;
  }
}

template <class F>
qa_status guard(F&& f) {
  try {
    g_error.clear();
    f();
    return QA_OK;
  } catch (const Error& e) {
    g_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return QA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return QA_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown exception";
    return QA_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

const detect::Detector& resolve(const qa_detector* d, std::unique_ptr<detect::Detector>& holder) {
  need(d, "detector");
  if (d->custom) return *d->custom;
  holder = d->built();
  return *holder;
}

qa_graph* wrap(Graph g) { return new qa_graph{std::make_shared<const Graph>(std::move(g))}; }

}  // namespace

extern "C" {

const char* qa_last_error(void) { return g_error.c_str(); }
const char* qa_version(void) { return "1.0.0"; }

const char* qa_status_string(qa_status s) {
  if (s == QA_OK) return "ok";
  return to_string(to_code(s));
}

const char* qa_buffer_data(const qa_buffer* b) { return b ? b->text.c_str() : ""; }
size_t qa_buffer_size(const qa_buffer* b) { return b ? b->text.size() : 0; }
void qa_buffer_free(qa_buffer* b) { delete b; }

qa_status qa_graph_create(size_t n, const uint32_t* edges, size_t m, qa_graph** out) {
  return guard([&] {
    need(out, "out");
    if (m > 0) need(edges, "edges");
    std::vector<Edge> e;
    e.reserve(m);
    for (size_t i = 0; i < m; ++i) e.emplace_back(edges[2 * i], edges[2 * i + 1]);
    *out = wrap(Graph(n, e));
  });
}

void qa_graph_free(qa_graph* g) { delete g; }
size_t qa_graph_node_count(const qa_graph* g) { return g ? g->g->node_count() : 0; }
size_t qa_graph_edge_count(const qa_graph* g) { return g ? g->g->edge_count() : 0; }

qa_status qa_graph_degree(const qa_graph* g, uint32_t v, size_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = neighbors(*g->g, v).size();
  });
}

int qa_graph_has_edge(const qa_graph* g, uint32_t u, uint32_t v) { return g && g->g->has_edge(u, v) ? 1 : 0; }

qa_status qa_graph_edges(const qa_graph* g, uint32_t* out, size_t capacity, size_t* written) {
  return guard([&] {
    need(g, "graph");
    const auto& e = g->g->edges();
    const size_t n = std::min(capacity, e.size());
    if (n > 0) need(out, "out");
    for (size_t i = 0; i < n; ++i) {
      out[2 * i] = e[i].first;
      out[2 * i + 1] = e[i].second;
    }
    if (written) *written = n;
  });
}

int qa_graph_equal(const qa_graph* a, const qa_graph* b) { return a && b && *a->g == *b->g ? 1 : 0; }

static void finish_network(qa_network* n) {
  n->graph.g = std::shared_ptr<const Graph>(std::shared_ptr<const Graph>(), &n->net.graph);
  if (n->net.ground_truth) n->truth = std::make_unique<qa_partition>(qa_partition{*n->net.ground_truth});
}

qa_status qa_network_load(const char* name_or_path, const char* data_dir, qa_network** out) {
  return guard([&] {
    need(name_or_path, "name");
    need(out, "out");
    auto n = std::make_unique<qa_network>();
    n->net = io::load_network(name_or_path, data_dir ? data_dir : "");
    finish_network(n.get());
    *out = n.release();
  });
}

qa_status qa_network_parse(const char* text, const char* format, qa_network** out) {
  return guard([&] {
    need(text, "text");
    need(format, "format");
    need(out, "out");
    auto n = std::make_unique<qa_network>();
    const std::string f = format;
    if (f == "gml") {
      n->net = io::parse_gml(text);
    } else if (f == "edgelist") {
      auto lg = io::parse_edgelist(text);
      n->net.graph = std::move(lg.graph);
      n->net.labels = std::move(lg.labels);
    } else {
      throw Error(ErrorCode::InvalidArgument, "format must be 'gml' or 'edgelist'");
    }
    finish_network(n.get());
    *out = n.release();
  });
}

void qa_network_free(qa_network* n) { delete n; }
const qa_graph* qa_network_graph(const qa_network* n) { return n ? &n->graph : nullptr; }
const qa_partition* qa_network_ground_truth(const qa_network* n) { return n ? n->truth.get() : nullptr; }

const char* qa_network_node_label(const qa_network* n, uint32_t v) {
  if (!n || v >= n->net.labels.size()) return nullptr;
  return n->net.labels[v].c_str();
}

qa_status qa_network_write(const qa_network* n, const qa_graph* g, const char* format, qa_buffer** out) {
  return guard([&] {
    need(n, "network");
    need(format, "format");
    need(out, "out");
    io::LabeledNetwork copy = n->net;
    if (g) {
      if (g->g->node_count() != copy.graph.node_count())
        throw Error(ErrorCode::InvalidArgument, "graph does not match the network's node set");
      copy.graph = *g->g;
    }
    const std::string f = format;
    std::string text;
    if (f == "gml") text = io::write_gml(copy);
    else if (f == "edgelist") text = io::write_edgelist(copy.graph, copy.labels);
    else throw Error(ErrorCode::InvalidArgument, "format must be 'gml' or 'edgelist'");
    *out = new qa_buffer{std::move(text)};
  });
}

qa_status qa_partition_create(const uint32_t* labels, size_t n, qa_partition** out) {
  return guard([&] {
    need(out, "out");
    if (n > 0) need(labels, "labels");
    std::vector<CommunityId> raw(labels, labels + n);
    for (auto l : raw)
      if (l >= 4 * n + 1024) throw Error(ErrorCode::InvalidArgument, "community labels must be small integers");
    *out = new qa_partition{Partition(std::move(raw))};
  });
}

void qa_partition_free(qa_partition* p) { delete p; }
size_t qa_partition_size(const qa_partition* p) { return p ? p->p.size() : 0; }
size_t qa_partition_community_count(const qa_partition* p) { return p ? p->p.community_count() : 0; }
uint32_t qa_partition_label(const qa_partition* p, uint32_t v) {
  return p && v < p->p.size() ? p->p[v] : UINT32_MAX;
}

qa_status qa_detector_create(qa_algorithm algorithm, qa_detector** out) {
  return guard([&] {
    need(out, "out");
    auto d = std::make_unique<qa_detector>();
    switch (algorithm) {
      case QA_FN: d->spec.algorithm = detect::Algorithm::FN; break;
      case QA_SOA: d->spec.algorithm = detect::Algorithm::SOA; break;
      case QA_LOUVAIN: d->spec.algorithm = detect::Algorithm::LOU; break;
      case QA_LPA: d->spec.algorithm = detect::Algorithm::LPA; break;
      default: throw Error(ErrorCode::InvalidArgument, "unknown algorithm");
    }
    *out = d.release();
  });
}

qa_status qa_detector_set_option(qa_detector* d, const char* key, const char* value) {
  return guard([&] {
    need(d, "detector");
    need(key, "key");
    need(value, "value");
    if (d->custom) throw Error(ErrorCode::Config, "custom detectors take no options");
    detect::apply_option(d->spec, key, value);
  });
}

qa_status qa_detector_create_custom(const char* name, int stochastic, qa_detect_callback cb, void* user,
                                    qa_detector** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    if (!cb) throw Error(ErrorCode::InvalidArgument, "callback must not be null");
    auto d = std::make_unique<qa_detector>();
    d->custom = detect::make_custom_detector(name, stochastic != 0, [cb, user](const Graph& g, std::uint64_t seed) {
      qa_graph view{std::shared_ptr<const Graph>(std::shared_ptr<const Graph>(), &g)};
      std::vector<uint32_t> labels(g.node_count(), 0);
      const qa_status s = cb(user, &view, seed, labels.data());
      if (s != QA_OK) throw Error(to_code(s), "custom detector failed with status " + std::to_string(s));
      return Partition(std::vector<CommunityId>(labels.begin(), labels.end()));
    });
    *out = d.release();
  });
}

void qa_detector_free(qa_detector* d) { delete d; }

int qa_detector_is_stochastic(const qa_detector* d) {
  if (!d) return 0;
  if (d->custom) return d->custom->stochastic() ? 1 : 0;
  return d->spec.algorithm == detect::Algorithm::LOU || d->spec.algorithm == detect::Algorithm::LPA;
}

qa_status qa_detect(const qa_detector* d, const qa_graph* g, uint64_t seed, qa_partition** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    std::unique_ptr<detect::Detector> holder;
    const auto& det = resolve(d, holder);
    if (g->g->node_count() == 0) throw Error(ErrorCode::InvalidArgument, "graph is empty");
    *out = new qa_partition{det.run(*g->g, seed)};
  });
}

qa_status qa_modularity(const qa_graph* g, const qa_partition* p, double* out) {
  return guard([&] {
    need(g, "graph");
    need(p, "partition");
    need(out, "out");
    *out = metrics::modularity(*g->g, p->p);
  });
}

qa_status qa_modularity_matrix(const qa_graph* g, const int* signs, size_t n, double* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    if (n > 0) need(signs, "signs");
    *out = metrics::modularity_matrix(*g->g, std::span<const int>(signs, n));
  });
}

qa_status qa_nmi(const qa_partition* x, const qa_partition* y, double* out, int* degenerate) {
  return guard([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    auto r = metrics::nmi_checked(x->p, y->p);
    *out = r.value;
    if (degenerate) *degenerate = r.degenerate ? 1 : 0;
  });
}

qa_status qa_relative_reduction(double before, double after, double* out) {
  return guard([&] {
    need(out, "out");
    *out = metrics::relative_reduction(before, after);
  });
}

qa_status qa_plan_create(const qa_gene* genes, size_t count, qa_plan** out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(genes, "genes");
    auto p = std::make_unique<qa_plan>();
    for (size_t i = 0; i < count; ++i) p->plan.push_back({genes[i].target, genes[i].delete_peer, genes[i].add_peer});
    *out = p.release();
  });
}

void qa_plan_free(qa_plan* p) { delete p; }
size_t qa_plan_size(const qa_plan* p) { return p ? p->plan.size() : 0; }

qa_status qa_plan_get(const qa_plan* p, size_t i, qa_gene* out) {
  return guard([&] {
    need(p, "plan");
    need(out, "out");
    if (i >= p->plan.size()) throw Error(ErrorCode::InvalidArgument, "gene index out of range");
    const auto& x = p->plan[i];
    *out = {x.target, x.delete_peer, x.add_peer};
  });
}

qa_status qa_plan_validate(const qa_graph* g, const qa_plan* p, size_t* bad_gene) {
  return guard([&] {
    need(g, "graph");
    need(p, "plan");
    if (auto v = find_violation(*g->g, p->plan)) {
      if (bad_gene) *bad_gene = v->gene;
      throw InfeasiblePlanError(v->gene, v->reason);
    }
  });
}

qa_status qa_apply_plan(const qa_graph* g, const qa_plan* p, qa_graph** out) {
  return guard([&] {
    need(g, "graph");
    need(p, "plan");
    need(out, "out");
    *out = wrap(apply_plan(*g->g, p->plan));
  });
}

static attacks::HeuristicConfig heuristic(const qa_heuristic_config* c) {
  need(c, "config");
  return {c->target_count, c->budget, c->seed};
}

qa_status qa_random_attack(const qa_graph* g, const qa_heuristic_config* cfg, qa_plan** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = new qa_plan{attacks::random_attack(*g->g, heuristic(cfg)).plan};
  });
}

qa_status qa_cda_attack(const qa_graph* g, const qa_heuristic_config* cfg, const qa_detector* d, qa_plan** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    std::unique_ptr<detect::Detector> holder;
    *out = new qa_plan{attacks::cda_attack(*g->g, heuristic(cfg), resolve(d, holder)).plan};
  });
}

qa_status qa_dba_attack(const qa_graph* g, const qa_heuristic_config* cfg, const qa_detector* d, qa_plan** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    std::unique_ptr<detect::Detector> holder;
    *out = new qa_plan{attacks::dba_attack(*g->g, heuristic(cfg), resolve(d, holder)).plan};
  });
}

qa_status qa_dba_targets(const qa_graph* g, const qa_partition* detected, uint32_t k, uint32_t* out) {
  return guard([&] {
    need(g, "graph");
    need(detected, "partition");
    need(out, "out");
    auto t = attacks::dba_targets(*g->g, detected->p, k);
    std::copy(t.begin(), t.end(), out);
  });
}

qa_status qa_exhaustive_best(const qa_graph* g, const qa_detector* d, uint64_t seed, size_t max_genes, qa_gene* best,
                             double* q_after) {
  return guard([&] {
    need(g, "graph");
    need(best, "best");
    std::unique_ptr<detect::Detector> holder;
    auto r = attacks::exhaustive_best_rewiring(*g->g, resolve(d, holder), seed, max_genes);
    *best = {r.gene.target, r.gene.delete_peer, r.gene.add_peer};
    if (q_after) *q_after = r.q_after;
  });
}

void qa_ga_config_init(qa_ga_config* c) {
  if (!c) return;
  const ga::GaConfig d;
  c->pop_size = d.pop_size;
  c->generations = d.generations;
  c->crossover_rate = d.crossover_rate;
  c->mutation_rate = d.mutation_rate;
  c->budget = d.budget;
  c->elitism_fraction = d.elitism_fraction;
  c->seed = d.seed;
  c->fitness_samples = d.fitness_samples;
  c->force_genetic = 0;
  c->exhaustive_limit = d.exhaustive_limit;
  c->memoize = d.memoize ? 1 : 0;
  c->audit = d.audit ? 1 : 0;
  c->jobs = d.jobs;
}

qa_status qa_qattack_run(const qa_graph* g, const qa_detector* d, const qa_ga_config* c, qa_ga_result** out) {
  return guard([&] {
    need(g, "graph");
    need(c, "config");
    need(out, "out");
    ga::GaConfig cfg;
    cfg.pop_size = c->pop_size;
    cfg.generations = c->generations;
    cfg.crossover_rate = c->crossover_rate;
    cfg.mutation_rate = c->mutation_rate;
    cfg.budget = c->budget;
    cfg.elitism_fraction = c->elitism_fraction;
    cfg.seed = c->seed;
    cfg.fitness_samples = c->fitness_samples;
    cfg.single_gene = c->force_genetic ? ga::SingleGeneMode::Genetic : ga::SingleGeneMode::Exhaustive;
    cfg.exhaustive_limit = c->exhaustive_limit;
    cfg.memoize = c->memoize != 0;
    cfg.audit = c->audit != 0;
    cfg.jobs = c->jobs;
    std::unique_ptr<detect::Detector> holder;
    auto r = std::make_unique<qa_ga_result>();
    r->r = ga::run_qattack(*g->g, resolve(d, holder), cfg);
    r->plan.plan = r->r.best_plan;
    *out = r.release();
  });
}

void qa_ga_result_free(qa_ga_result* r) { delete r; }
const qa_plan* qa_ga_result_plan(const qa_ga_result* r) { return r ? &r->plan : nullptr; }
double qa_ga_result_best_modularity(const qa_ga_result* r) { return r ? r->r.best_modularity : 0.0; }
double qa_ga_result_best_fitness(const qa_ga_result* r) { return r ? r->r.best_fitness : 0.0; }
size_t qa_ga_result_history_size(const qa_ga_result* r) { return r ? r->r.history.size() : 0; }
double qa_ga_result_history(const qa_ga_result* r, size_t i) {
  return r && i < r->r.history.size() ? r->r.history[i] : 0.0;
}
int qa_ga_result_exhaustive(const qa_ga_result* r) { return r && r->r.exhaustive ? 1 : 0; }

qa_status qa_harness_run(const char* verb, const char* spec_json, qa_buffer** out, int* exit_code) {
  return guard([&] {
    need(verb, "verb");
    need(out, "out");
    auto spec = harness::spec_from_json(spec_json ? spec_json : "{}");
    auto r = harness::run_verb(verb, spec);
    if (exit_code) *exit_code = r.exit_code;
    *out = new qa_buffer{std::move(r.text)};
  });
}

}  // extern "C"
