// Exercises the shared library through the C interface only.
#include <gtest/gtest.h>

#include <cstring>
#include <string>
#include <vector>

#include "qattack/qattack.h"

namespace {

TEST(CApi, LoadDetectAndScore) {
  qa_network* net = nullptr;
  ASSERT_EQ(qa_network_load("karate", nullptr, &net), QA_OK);
  const qa_graph* g = qa_network_graph(net);
  EXPECT_EQ(qa_graph_node_count(g), 34u);
  EXPECT_EQ(qa_graph_edge_count(g), 78u);
  EXPECT_STREQ(qa_network_node_label(net, 0), "1");
  const qa_partition* truth = qa_network_ground_truth(net);
  ASSERT_NE(truth, nullptr);
  EXPECT_EQ(qa_partition_community_count(truth), 2u);

  qa_detector* fn = nullptr;
  ASSERT_EQ(qa_detector_create(QA_FN, &fn), QA_OK);
  qa_partition* p = nullptr;
  ASSERT_EQ(qa_detect(fn, g, 0, &p), QA_OK);
  double q = 0, nmi = 0;
  int degenerate = -1;
  ASSERT_EQ(qa_modularity(g, p, &q), QA_OK);
  EXPECT_NEAR(q, 0.3807, 1e-3);
  ASSERT_EQ(qa_nmi(p, truth, &nmi, &degenerate), QA_OK);
  EXPECT_EQ(degenerate, 0);
  EXPECT_GT(nmi, 0.5);
  qa_partition_free(p);
  qa_detector_free(fn);
  qa_network_free(net);
}

TEST(CApi, ErrorsCarryStatusAndMessage) {
  qa_network* net = nullptr;
  EXPECT_EQ(qa_network_load("no-such-network", nullptr, &net), QA_ERR_CONFIG);
  EXPECT_NE(std::strlen(qa_last_error()), 0u);
  EXPECT_EQ(qa_network_parse("graph [ node [ id 1 ]", "gml", &net), QA_ERR_PARSE);
  const uint32_t loop[] = {1, 1};
  qa_graph* g = nullptr;
  EXPECT_EQ(qa_graph_create(3, loop, 1, &g), QA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(qa_modularity(nullptr, nullptr, nullptr), QA_ERR_INVALID_ARGUMENT);
  double r = 0;
  EXPECT_EQ(qa_relative_reduction(0.0, 1.0, &r), QA_ERR_UNDEFINED_METRIC);
  EXPECT_STREQ(qa_status_string(QA_OK), "ok");
}

TEST(CApi, PlansValidateAndApply) {
  const uint32_t edges[] = {0, 1, 1, 2, 2, 3, 3, 4};
  qa_graph* g = nullptr;
  ASSERT_EQ(qa_graph_create(5, edges, 4, &g), QA_OK);
  const qa_gene genes[] = {{1, 0, 3}, {1, 0, 4}};
  qa_plan* plan = nullptr;
  ASSERT_EQ(qa_plan_create(genes, 2, &plan), QA_OK);
  size_t bad = 99;
  EXPECT_EQ(qa_plan_validate(g, plan, &bad), QA_ERR_INFEASIBLE);
  EXPECT_EQ(bad, 1u);
  qa_plan_free(plan);
  ASSERT_EQ(qa_plan_create(genes, 1, &plan), QA_OK);
  EXPECT_EQ(qa_plan_validate(g, plan, &bad), QA_OK);
  qa_graph* h = nullptr;
  ASSERT_EQ(qa_apply_plan(g, plan, &h), QA_OK);
  EXPECT_EQ(qa_graph_has_edge(h, 1, 3), 1);
  EXPECT_EQ(qa_graph_has_edge(h, 0, 1), 0);
  EXPECT_EQ(qa_graph_equal(g, h), 0);
  std::vector<uint32_t> out(8);
  size_t written = 0;
  ASSERT_EQ(qa_graph_edges(h, out.data(), 4, &written), QA_OK);
  EXPECT_EQ(written, 4u);
  qa_graph_free(h);
  qa_plan_free(plan);
  qa_graph_free(g);
}

qa_status halves(void* user, const qa_graph* g, uint64_t, uint32_t* labels) {
  ++*static_cast<int*>(user);
  const size_t n = qa_graph_node_count(g);
  for (size_t v = 0; v < n; ++v) labels[v] = v < n / 2 ? 0 : 1;
  return QA_OK;
}

qa_status failing(void*, const qa_graph*, uint64_t, uint32_t*) { return QA_ERR_CONVERGENCE; }

TEST(CApi, CustomDetectorDrivesTheGa) {
  qa_network* net = nullptr;
  ASSERT_EQ(qa_network_load("karate", nullptr, &net), QA_OK);
  int calls = 0;
  qa_detector* d = nullptr;
  ASSERT_EQ(qa_detector_create_custom("halves", 0, halves, &calls, &d), QA_OK);
  EXPECT_EQ(qa_detector_is_stochastic(d), 0);
  qa_ga_config cfg;
  qa_ga_config_init(&cfg);
  EXPECT_EQ(cfg.pop_size, 100u);
  cfg.pop_size = 10;
  cfg.generations = 5;
  cfg.budget = 2;
  qa_ga_result* r = nullptr;
  ASSERT_EQ(qa_qattack_run(qa_network_graph(net), d, &cfg, &r), QA_OK);
  EXPECT_GT(calls, 0);
  EXPECT_EQ(qa_ga_result_history_size(r), 6u);
  EXPECT_EQ(qa_plan_size(qa_ga_result_plan(r)), 2u);
  EXPECT_EQ(qa_ga_result_exhaustive(r), 0);
  qa_ga_result_free(r);
  qa_detector_free(d);

  ASSERT_EQ(qa_detector_create_custom("failing", 0, failing, nullptr, &d), QA_OK);
  qa_partition* p = nullptr;
  EXPECT_EQ(qa_detect(d, qa_network_graph(net), 0, &p), QA_ERR_CONVERGENCE);
  EXPECT_EQ(qa_detector_set_option(d, "max_sweeps", "3"), QA_ERR_CONFIG);
  qa_detector_free(d);
  qa_network_free(net);
}

TEST(CApi, HeuristicAttacksAndOptions) {
  qa_network* net = nullptr;
  ASSERT_EQ(qa_network_load("dolphins", nullptr, &net), QA_OK);
  const qa_graph* g = qa_network_graph(net);
  qa_detector* lpa = nullptr;
  ASSERT_EQ(qa_detector_create(QA_LPA, &lpa), QA_OK);
  EXPECT_EQ(qa_detector_set_option(lpa, "max_sweeps", "50"), QA_OK);
  EXPECT_EQ(qa_detector_set_option(lpa, "nonsense", "1"), QA_ERR_CONFIG);
  EXPECT_EQ(qa_detector_is_stochastic(lpa), 1);
  const qa_heuristic_config hc{6, 3, 42};
  qa_plan* plan = nullptr;
  for (auto fn : {qa_cda_attack, qa_dba_attack}) {
    ASSERT_EQ(fn(g, &hc, lpa, &plan), QA_OK);
    EXPECT_EQ(qa_plan_size(plan), 3u);
    EXPECT_EQ(qa_plan_validate(g, plan, nullptr), QA_OK);
    qa_plan_free(plan);
  }
  ASSERT_EQ(qa_random_attack(g, &hc, &plan), QA_OK);
  qa_gene gene;
  EXPECT_EQ(qa_plan_get(plan, 0, &gene), QA_OK);
  EXPECT_EQ(qa_plan_get(plan, 5, &gene), QA_ERR_INVALID_ARGUMENT);
  qa_plan_free(plan);
  qa_buffer* text = nullptr;
  ASSERT_EQ(qa_network_write(net, nullptr, "edgelist", &text), QA_OK);
  EXPECT_GT(qa_buffer_size(text), 0u);
  qa_buffer_free(text);
  qa_detector_free(lpa);
  qa_network_free(net);
}

TEST(CApi, HarnessRoundTrip) {
  qa_buffer* out = nullptr;
  int code = -1;
  ASSERT_EQ(qa_harness_run("attack", R"({"network":"karate","strategy":"dba","detector":"fn","seed":5})", &out, &code),
            QA_OK);
  EXPECT_EQ(code, 0);
  EXPECT_NE(std::string(qa_buffer_data(out)).find("\"strategy\": \"dba\""), std::string::npos) << qa_buffer_data(out);
  qa_buffer_free(out);
  EXPECT_EQ(qa_harness_run("attack", R"({"gens":"many"})", &out, &code), QA_ERR_CONFIG);
}

}  // namespace
