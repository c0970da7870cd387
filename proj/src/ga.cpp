#include "qattack/ga.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "parallel.hpp"
#include "qattack/error.hpp"
#include "qattack/metrics.hpp"

namespace qattack::ga {

namespace {

bool clashes(std::span<const RewiringGene> plan, std::size_t skip, const RewiringGene& x) {
  const Edge del = make_edge(x.target, x.delete_peer);
  const Edge add = make_edge(x.target, x.add_peer);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i == skip) continue;
    if (make_edge(plan[i].target, plan[i].delete_peer) == del) return true;
    if (make_edge(plan[i].target, plan[i].add_peer) == add) return true;
  }
  return false;
}

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

using PlanKey = std::vector<Edge>;

PlanKey plan_key(const RewiringPlan& plan) {
  PlanKey del, add;
  for (const auto& x : plan) {
    del.push_back(make_edge(x.target, x.delete_peer));
    add.push_back(make_edge(x.target, x.add_peer));
  }
  std::sort(del.begin(), del.end());
  std::sort(add.begin(), add.end());
  del.push_back({0, 0});  // separator; never a real edge
  del.insert(del.end(), add.begin(), add.end());
  return del;
}

class Evaluator {
 public:
  Evaluator(const Graph& g, const detect::Detector& d, const GaConfig& cfg)
      : g_(g), d_(d), cfg_(cfg), memo_(cfg.memoize && !d.stochastic()) {}

  void evaluate(Population& pop, std::uint32_t generation) {
    std::vector<std::size_t> todo;
    std::vector<PlanKey> keys(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (pop[i].fitness) continue;
      if (memo_) {
        keys[i] = plan_key(pop[i].plan);
        if (auto it = cache_.find(keys[i]); it != cache_.end()) {
          set(pop[i], it->second);
          ++hits;
          continue;
        }
      }
      todo.push_back(i);
    }
    std::vector<double> qs(todo.size());
    parallel_for(todo.size(), cfg_.jobs, [&](std::size_t t) {
      const auto i = todo[t];
      const Graph h = apply_plan(g_, pop[i].plan);
      const std::uint32_t samples = d_.stochastic() ? cfg_.fitness_samples : 1;
      double sum = 0.0;
      for (std::uint32_t s = 0; s < samples; ++s) {
        const auto seed = derive_seed(cfg_.seed, {seed_tag::kFitness, generation, i, s});
        sum += metrics::modularity(h, d_.run(h, seed));
      }
      qs[t] = sum / samples;
    });
    for (std::size_t t = 0; t < todo.size(); ++t) {
      set(pop[todo[t]], qs[t]);
      if (memo_) cache_.emplace(std::move(keys[todo[t]]), qs[t]);
    }
    evaluations += todo.size();
  }

  std::size_t evaluations = 0;
  std::size_t hits = 0;

 private:
  static void set(Chromosome& c, double q) {
    c.modularity = q;
    c.fitness = fitness_from_modularity(q);
  }

  const Graph& g_;
  const detect::Detector& d_;
  const GaConfig& cfg_;
  bool memo_;
  std::map<PlanKey, double> cache_;
};

void audit(const Graph& g, const Population& pop, std::uint32_t generation) {
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (auto v = find_violation(g, pop[i].plan))
      throw Error(ErrorCode::Internal, "audit failed in generation " + std::to_string(generation) +
                                           ", chromosome " + std::to_string(i) + ": " + v->reason);
}

}  // namespace

void validate(const GaConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::Config, what); };
  if (cfg.pop_size < 2 || cfg.pop_size % 2 != 0) bad("pop_size must be even and at least 2");
  if (!(cfg.crossover_rate >= 0.0 && cfg.crossover_rate <= 1.0)) bad("crossover rate must be in [0, 1]");
  if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0)) bad("mutation rate must be in [0, 1]");
  if (cfg.budget < 1) bad("budget T must be at least 1");
  if (!(cfg.elitism_fraction >= 0.0 && cfg.elitism_fraction <= 1.0)) bad("elitism fraction must be in [0, 1]");
  if (cfg.fitness_samples < 1) bad("fitness samples must be at least 1");
}

std::optional<RewiringGene> random_gene(const Graph& g, std::span<const RewiringGene> others, Rng& rng,
                                        std::uint32_t tries) {
  const auto n = static_cast<NodeId>(g.node_count());
  if (n < 3) return std::nullopt;
  for (std::uint32_t t = 0; t < tries; ++t) {
    const NodeId v = uniform_index(rng, n);
    if (g.degree(v) == 0 || g.degree(v) + 1 >= n) continue;
    auto nb = g.neighbors(v);
    const NodeId d = nb[uniform_index(rng, nb.size())];
    const NodeId a = *random_non_neighbor(g, v, rng);
    const RewiringGene x{v, d, a};
    if (!clashes(others, kNoSkip, x)) return x;
  }
  return std::nullopt;
}

Population initialize(const Graph& g, const GaConfig& cfg, Rng& rng) {
  validate(cfg);
  if (attacks::feasible_gene_count(g) == 0)
    throw Error(ErrorCode::Config, "graph admits no rewiring (empty or complete)");
  Population pop(cfg.pop_size);
  for (auto& c : pop) {
    c.plan.reserve(cfg.budget);
    while (c.plan.size() < cfg.budget) {
      auto x = random_gene(g, c.plan, rng, 100000);
      if (!x)
        throw Error(ErrorCode::Config, "cannot place " + std::to_string(cfg.budget) +
                                           " conflict-free rewirings on this graph");
      c.plan.push_back(*x);
    }
  }
  return pop;
}

std::vector<std::size_t> select(const Population& pop, std::size_t draws, Rng& rng) {
  std::vector<double> w;
  w.reserve(pop.size());
  for (const auto& c : pop) {
    if (!c.fitness) throw Error(ErrorCode::Internal, "selection on unevaluated chromosome");
    w.push_back(*c.fitness);
  }
  std::discrete_distribution<std::size_t> wheel(w.begin(), w.end());
  std::vector<std::size_t> out(draws);
  for (auto& i : out) i = wheel(rng);
  return out;
}

bool crossover(Chromosome& a, Chromosome& b, double rate, Rng& rng) {
  if (!std::bernoulli_distribution(rate)(rng)) return false;
  const std::size_t t = a.plan.size();
  if (t < 2 || b.plan.size() != t) return false;
  const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, t - 1)(rng);
  RewiringPlan ca(a.plan.begin(), a.plan.begin() + cut), cb(b.plan.begin(), b.plan.begin() + cut);
  ca.insert(ca.end(), b.plan.begin() + cut, b.plan.end());
  cb.insert(cb.end(), a.plan.begin() + cut, a.plan.end());
  // Feasibility test: only the gene-vs-gene conflicts can change.
  for (std::size_t i = cut; i < t; ++i)
    if (clashes(std::span(ca).first(cut), kNoSkip, ca[i]) || clashes(std::span(cb).first(cut), kNoSkip, cb[i]))
      return false;
  if (ca == a.plan && cb == b.plan) return false;
  a = Chromosome{std::move(ca), {}, {}};
  b = Chromosome{std::move(cb), {}, {}};
  return true;
}

bool crossover_single(const Graph& g, Chromosome& a, Chromosome& b, double rate, Rng& rng) {
  if (!std::bernoulli_distribution(rate)(rng)) return false;
  bool changed = false;
  for (std::size_t i = 0; i < a.plan.size(); ++i)
    for (std::size_t j = 0; j < b.plan.size(); ++j) {
      auto& x = a.plan[i];
      auto& y = b.plan[j];
      if (x.target != y.target || x.add_peer == y.add_peer) continue;
      RewiringGene nx{x.target, x.delete_peer, y.add_peer}, ny{y.target, y.delete_peer, x.add_peer};
      if (clashes(a.plan, i, nx) || clashes(b.plan, j, ny)) continue;
      if (nx.add_peer == nx.delete_peer || ny.add_peer == ny.delete_peer || g.has_edge(nx.target, nx.add_peer))
        continue;
      x = nx;
      y = ny;
      changed = true;
    }
  if (changed) {
    a.fitness.reset();
    a.modularity.reset();
    b.fitness.reset();
    b.modularity.reset();
  }
  return changed;
}

bool mutate_gene(const Graph& g, RewiringPlan& plan, std::size_t index, MutationKind kind, Rng& rng) {
  const RewiringGene cur = plan[index];
  for (std::uint32_t t = 0; t < kMutationRetries; ++t) {
    RewiringGene x = cur;
    switch (kind) {
      case MutationKind::Deletion: {
        auto nb = g.neighbors(cur.target);
        if (nb.size() < 2) return false;
        x.delete_peer = nb[uniform_index(rng, nb.size())];
        if (x.delete_peer == cur.delete_peer) continue;
        break;
      }
      case MutationKind::Addition: {
        if (g.degree(cur.target) + 2 >= g.node_count()) return false;  // only one non-neighbour
        x.add_peer = *random_non_neighbor(g, cur.target, rng);
        if (x.add_peer == cur.add_peer) continue;
        break;
      }
      case MutationKind::Reconnection: {
        auto y = random_gene(g, {}, rng, kMutationRetries);
        if (!y) return false;
        x = *y;
        break;
      }
    }
    if (clashes(plan, index, x)) continue;
    plan[index] = x;
    return x != cur;
  }
  return false;
}

bool mutate(const Graph& g, Chromosome& c, double rate, Rng& rng, MutationStats* stats) {
  std::bernoulli_distribution coin(rate);
  std::uniform_int_distribution<int> pick(0, 2);
  bool changed = false;
  for (std::size_t i = 0; i < c.plan.size(); ++i) {
    if (!coin(rng)) continue;
    const auto kind = static_cast<MutationKind>(pick(rng));
    if (stats) ++stats->chosen[static_cast<int>(kind)];
    if (mutate_gene(g, c.plan, i, kind, rng)) {
      if (stats) ++stats->applied[static_cast<int>(kind)];
      changed = true;
    }
  }
  if (changed) {
    c.fitness.reset();
    c.modularity.reset();
  }
  return changed;
}

Population elitism(const Population& parents, Population offspring, double fraction) {
  auto by_fitness = [](const Chromosome& x, const Chromosome& y) { return x.fitness.value() > y.fitness.value(); };
  std::stable_sort(offspring.begin(), offspring.end(), by_fitness);
  std::vector<std::size_t> order(parents.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return by_fitness(parents[x], parents[y]); });
  const auto elite = std::min<std::size_t>(
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(offspring.size()) + 1e-9)),
      std::min(offspring.size(), parents.size()));
  for (std::size_t j = 0; j < elite; ++j) offspring[offspring.size() - elite + j] = parents[order[j]];
  return offspring;
}

QAttackResult run_qattack(const Graph& g, const detect::Detector& detector, const GaConfig& cfg) {
  validate(cfg);
  if (g.edge_count() == 0) throw Error(ErrorCode::Config, "graph has no edges");
  QAttackResult result;

  if (cfg.budget == 1 && cfg.single_gene == SingleGeneMode::Exhaustive &&
      attacks::feasible_gene_count(g) <= cfg.exhaustive_limit) {
    auto ex = attacks::exhaustive_best_rewiring(g, detector, derive_seed(cfg.seed, {seed_tag::kExhaustive}),
                                                cfg.exhaustive_limit);
    result.best_plan = {ex.gene};
    result.best_modularity = ex.q_after;
    result.best_fitness = fitness_from_modularity(ex.q_after);
    result.history = {result.best_fitness};
    result.exhaustive = true;
    result.evaluations = ex.evaluated;
    return result;
  }

  Evaluator eval(g, detector, cfg);
  Rng init_rng(derive_seed(cfg.seed, {seed_tag::kInit}));
  Population pop = initialize(g, cfg, init_rng);
  eval.evaluate(pop, 0);
  if (cfg.audit) audit(g, pop, 0);

  bool have_best = false;
  auto track = [&](const Population& p) {
    for (const auto& c : p)
      if (!have_best || *c.fitness > result.best_fitness) {
        have_best = true;
        result.best_fitness = *c.fitness;
        result.best_modularity = *c.modularity;
        result.best_plan = c.plan;
      }
  };
  auto population_best = [](const Population& p) {
    double b = 0.0;
    for (const auto& c : p) b = std::max(b, *c.fitness);
    return b;
  };
  track(pop);
  result.history.push_back(population_best(pop));

  for (std::uint32_t gen = 1; gen <= cfg.generations; ++gen) {
    Rng rng(derive_seed(cfg.seed, {seed_tag::kOperators, gen}));
    Population offspring;
    offspring.reserve(pop.size());
    for (auto i : select(pop, pop.size(), rng)) offspring.push_back(pop[i]);
    for (std::size_t k = 0; k + 1 < offspring.size(); k += 2) {
      if (cfg.budget == 1)
        crossover_single(g, offspring[k], offspring[k + 1], cfg.crossover_rate, rng);
      else
        crossover(offspring[k], offspring[k + 1], cfg.crossover_rate, rng);
    }
    for (auto& c : offspring) mutate(g, c, cfg.mutation_rate, rng);
    eval.evaluate(offspring, gen);
    track(offspring);
    pop = elitism(pop, std::move(offspring), cfg.elitism_fraction);
    if (cfg.audit) audit(g, pop, gen);
    result.history.push_back(population_best(pop));
  }
  result.evaluations = eval.evaluations;
  result.cache_hits = eval.hits;
  return result;
}

}  // namespace qattack::ga
