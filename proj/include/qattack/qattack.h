/* C interface to the qattack library.
 *
 * Every function returns a qa_status; on failure qa_last_error() describes
 * the problem (thread-local, valid until the next call on the same thread).
 * Objects returned through out-pointers are owned by the caller and must be
 * released with the matching *_free function.
 */
#ifndef QATTACK_H
#define QATTACK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(QATTACK_BUILDING_LIBRARY)
#define QA_API __attribute__((visibility("default")))
#else
#define QA_API
#endif

typedef enum qa_status {
  QA_OK = 0,
  QA_ERR_INVALID_ARGUMENT = 1,
  QA_ERR_CONFIG = 2,
  QA_ERR_INFEASIBLE = 3,
  QA_ERR_PARSE = 4,
  QA_ERR_IO = 5,
  QA_ERR_UNDEFINED_METRIC = 6,
  QA_ERR_CONVERGENCE = 7,
  QA_ERR_CHECKSUM = 8,
  QA_ERR_BUDGET = 9,
  QA_ERR_INTERNAL = 10
} qa_status;

typedef enum qa_algorithm { QA_FN = 0, QA_SOA = 1, QA_LOUVAIN = 2, QA_LPA = 3 } qa_algorithm;

typedef struct qa_graph qa_graph;
typedef struct qa_network qa_network;
typedef struct qa_partition qa_partition;
typedef struct qa_plan qa_plan;
typedef struct qa_detector qa_detector;
typedef struct qa_ga_result qa_ga_result;
typedef struct qa_buffer qa_buffer;

typedef struct qa_gene {
  uint32_t target;
  uint32_t delete_peer;
  uint32_t add_peer;
} qa_gene;

QA_API const char* qa_last_error(void);
QA_API const char* qa_version(void);
QA_API const char* qa_status_string(qa_status status);

/* Text buffers (reports, serialized graphs). */
QA_API const char* qa_buffer_data(const qa_buffer* b);
QA_API size_t qa_buffer_size(const qa_buffer* b);
QA_API void qa_buffer_free(qa_buffer* b);

/* Graphs: `edges` holds m pairs of node ids (2*m entries). */
QA_API qa_status qa_graph_create(size_t node_count, const uint32_t* edges, size_t edge_count, qa_graph** out);
QA_API void qa_graph_free(qa_graph* g);
QA_API size_t qa_graph_node_count(const qa_graph* g);
QA_API size_t qa_graph_edge_count(const qa_graph* g);
QA_API qa_status qa_graph_degree(const qa_graph* g, uint32_t v, size_t* out);
QA_API int qa_graph_has_edge(const qa_graph* g, uint32_t u, uint32_t v);
/* Copies up to `capacity` pairs in sorted order; `written` gets the pair count. */
QA_API qa_status qa_graph_edges(const qa_graph* g, uint32_t* out, size_t capacity, size_t* written);
QA_API int qa_graph_equal(const qa_graph* a, const qa_graph* b);

/* Networks: a graph plus original node labels and optional ground truth.
 * `name_or_path` is a bundled dataset name or a .gml / edge-list file.
 * `data_dir` may be NULL. */
QA_API qa_status qa_network_load(const char* name_or_path, const char* data_dir, qa_network** out);
/* format: "gml" or "edgelist". */
QA_API qa_status qa_network_parse(const char* text, const char* format, qa_network** out);
QA_API void qa_network_free(qa_network* n);
QA_API const qa_graph* qa_network_graph(const qa_network* n);
/* NULL when the network carries no community labels. */
QA_API const qa_partition* qa_network_ground_truth(const qa_network* n);
QA_API const char* qa_network_node_label(const qa_network* n, uint32_t v);
/* Serializes `g` (or the network's own graph when NULL) with the network's labels. */
QA_API qa_status qa_network_write(const qa_network* n, const qa_graph* g, const char* format, qa_buffer** out);

/* Partitions: labels are renumbered 0..h-1 by first occurrence. */
QA_API qa_status qa_partition_create(const uint32_t* labels, size_t n, qa_partition** out);
QA_API void qa_partition_free(qa_partition* p);
QA_API size_t qa_partition_size(const qa_partition* p);
QA_API size_t qa_partition_community_count(const qa_partition* p);
QA_API uint32_t qa_partition_label(const qa_partition* p, uint32_t v);

/* Detectors. Options use the same keys as the CLI --detector-opt flag:
 * tolerance, max_iterations, max_splits, dense_fallback, dense_limit, max_sweeps. */
QA_API qa_status qa_detector_create(qa_algorithm algorithm, qa_detector** out);
QA_API qa_status qa_detector_set_option(qa_detector* d, const char* key, const char* value);

/* External detectors: the callback writes one label per node into labels_out. */
typedef qa_status (*qa_detect_callback)(void* user, const qa_graph* g, uint64_t seed, uint32_t* labels_out);
QA_API qa_status qa_detector_create_custom(const char* name, int stochastic, qa_detect_callback callback,
                                           void* user, qa_detector** out);
QA_API void qa_detector_free(qa_detector* d);
QA_API int qa_detector_is_stochastic(const qa_detector* d);
QA_API qa_status qa_detect(const qa_detector* d, const qa_graph* g, uint64_t seed, qa_partition** out);

/* Metrics. */
QA_API qa_status qa_modularity(const qa_graph* g, const qa_partition* p, double* out);
QA_API qa_status qa_modularity_matrix(const qa_graph* g, const int* signs, size_t n, double* out);
/* `degenerate` (may be NULL) is set when both partitions are single communities. */
QA_API qa_status qa_nmi(const qa_partition* x, const qa_partition* y, double* out, int* degenerate);
QA_API qa_status qa_relative_reduction(double before, double after, double* out);

/* Rewiring plans. */
QA_API qa_status qa_plan_create(const qa_gene* genes, size_t count, qa_plan** out);
QA_API void qa_plan_free(qa_plan* p);
QA_API size_t qa_plan_size(const qa_plan* p);
QA_API qa_status qa_plan_get(const qa_plan* p, size_t index, qa_gene* out);
/* QA_ERR_INFEASIBLE with *bad_gene set to the first violating gene. */
QA_API qa_status qa_plan_validate(const qa_graph* g, const qa_plan* p, size_t* bad_gene);
QA_API qa_status qa_apply_plan(const qa_graph* g, const qa_plan* p, qa_graph** out);

/* Heuristic attacks. The returned plan can be shorter than the budget when
 * the graph runs out of feasible rewirings. */
typedef struct qa_heuristic_config {
  uint32_t target_count;
  uint32_t budget;
  uint64_t seed;
} qa_heuristic_config;

QA_API qa_status qa_random_attack(const qa_graph* g, const qa_heuristic_config* cfg, qa_plan** out);
QA_API qa_status qa_cda_attack(const qa_graph* g, const qa_heuristic_config* cfg, const qa_detector* d,
                               qa_plan** out);
QA_API qa_status qa_dba_attack(const qa_graph* g, const qa_heuristic_config* cfg, const qa_detector* d,
                               qa_plan** out);
/* Writes k node ids to out. */
QA_API qa_status qa_dba_targets(const qa_graph* g, const qa_partition* detected, uint32_t k, uint32_t* out);
QA_API qa_status qa_exhaustive_best(const qa_graph* g, const qa_detector* d, uint64_t seed, size_t max_genes,
                                    qa_gene* best, double* q_after);

/* Q-Attack. */
typedef struct qa_ga_config {
  uint32_t pop_size;
  uint32_t generations;
  double crossover_rate;
  double mutation_rate;
  uint32_t budget;
  double elitism_fraction;
  uint64_t seed;
  uint32_t fitness_samples;
  int force_genetic; /* nonzero: no exhaustive search at budget 1 */
  size_t exhaustive_limit;
  int memoize;
  int audit;
  unsigned jobs;
} qa_ga_config;

QA_API void qa_ga_config_init(qa_ga_config* cfg);
QA_API qa_status qa_qattack_run(const qa_graph* g, const qa_detector* d, const qa_ga_config* cfg,
                                qa_ga_result** out);
QA_API void qa_ga_result_free(qa_ga_result* r);
QA_API const qa_plan* qa_ga_result_plan(const qa_ga_result* r);
QA_API double qa_ga_result_best_modularity(const qa_ga_result* r);
QA_API double qa_ga_result_best_fitness(const qa_ga_result* r);
QA_API size_t qa_ga_result_history_size(const qa_ga_result* r);
QA_API double qa_ga_result_history(const qa_ga_result* r, size_t generation);
QA_API int qa_ga_result_exhaustive(const qa_ga_result* r);

/* Experiment harness. verb: attack, sweep, table2, transfer, tune.
 * spec_json is a JSON object (see README). `exit_code` (may be NULL) is 3
 * when an attack could not place its full budget. */
QA_API qa_status qa_harness_run(const char* verb, const char* spec_json, qa_buffer** out, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
