#ifndef LGLS_H
#define LGLS_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LglsStatus {
  LGLS_STATUS_OK = 0,
  LGLS_STATUS_NULL_POINTER = 1,
  LGLS_STATUS_INVALID_ARGUMENT = 2,
  LGLS_STATUS_VERTEX_OUT_OF_RANGE = 3,
  LGLS_STATUS_UNKNOWN_EDGE = 4,
  LGLS_STATUS_INVALID_WEIGHT = 5,
  LGLS_STATUS_INCONSISTENT_HEURISTIC = 6,
  LGLS_STATUS_INVARIANT_VIOLATION = 7,
  LGLS_STATUS_BUFFER_TOO_SMALL = 8,
  LGLS_STATUS_PANIC = 9,
} LglsStatus;

typedef enum LglsAlgorithm {
  LGLS_ALGORITHM_LGLS = 0,
  LGLS_ALGORITHM_GLS = 1,
  LGLS_ALGORITHM_LPASTAR = 2,
} LglsAlgorithm;

typedef struct LglsGraphBuilder LglsGraphBuilder;

typedef struct LglsPlanner LglsPlanner;

/**
 * Planner settings. `alpha == 0` selects the shortest-path event, any
 * other value a constant-depth event with that many unevaluated edges.
 */
typedef struct LglsPlannerOptions {
  enum LglsAlgorithm algorithm;
  uint32_t alpha;
  double inflation;
  double truncation;
  bool check_invariants;
} LglsPlannerOptions;

/**
 * True cost of the edge `(source, target)`. Must return a positive value
 * or positive infinity.
 */
typedef double (*LglsEdgeCostFn)(void *user_data, uint32_t source, uint32_t target);

typedef struct LglsPlanResult {
  bool solved;
  double cost;
  size_t path_len;
  uint64_t edge_evaluations;
  uint64_t vertex_expansions;
  uint64_t event_triggers;
  double wall_ms;
} LglsPlanResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an empty graph builder, or returns null for zero vertices.
 */
struct LglsGraphBuilder *lgls_graph_builder_new(uint32_t vertex_count, bool undirected);

/**
 * Adds an edge with its cheap lower-bound weight.
 *
 * # Safety
 * `builder` must come from [`lgls_graph_builder_new`] and not be freed.
 */
enum LglsStatus lgls_graph_builder_add_edge(struct LglsGraphBuilder *builder,
                                            uint32_t source,
                                            uint32_t target,
                                            double heuristic_weight);

/**
 * # Safety
 * `builder` must be null or come from [`lgls_graph_builder_new`].
 */
void lgls_graph_builder_free(struct LglsGraphBuilder *builder);

/**
 * Default options: lazy planner, shortest-path event, no inflation.
 */
struct LglsPlannerOptions lgls_planner_options_default(void);

/**
 * Builds a planner over the builder's graph. The builder stays valid and
 * may be reused or freed afterwards. `heuristic` holds one goal-distance
 * estimate per vertex and may be null for all zeros.
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `cost` and `user_data`
 * must stay usable for as long as the planner lives.
 */
enum LglsStatus lgls_planner_new(const struct LglsGraphBuilder *builder,
                                 const struct LglsPlannerOptions *options,
                                 uint32_t start,
                                 uint32_t goal,
                                 const double *heuristic,
                                 size_t heuristic_len,
                                 LglsEdgeCostFn cost,
                                 void *user_data,
                                 struct LglsPlanner **out);

/**
 * # Safety
 * `planner` must be null or come from [`lgls_planner_new`].
 */
void lgls_planner_free(struct LglsPlanner *planner);

/**
 * Runs one planning episode.
 *
 * # Safety
 * `planner` and `out` must be valid.
 */
enum LglsStatus lgls_planner_plan(struct LglsPlanner *planner, struct LglsPlanResult *out);

/**
 * Copies the last planned path into `buf`. `len` always receives the path
 * length; a short buffer yields [`LglsStatus::BufferTooSmall`].
 *
 * # Safety
 * `buf` must hold `capacity` values (or be null with zero capacity).
 */
enum LglsStatus lgls_planner_path(const struct LglsPlanner *planner,
                                  uint32_t *buf,
                                  size_t capacity,
                                  size_t *len);

/**
 * Replaces the cost callback, for when the world behind it changes.
 *
 * # Safety
 * As for [`lgls_planner_new`].
 */
enum LglsStatus lgls_planner_set_oracle(struct LglsPlanner *planner,
                                        LglsEdgeCostFn cost,
                                        void *user_data);

/**
 * Announces `count` changed edges given as `(source, target)` pairs in
 * `edges[0..2 * count]`.
 *
 * # Safety
 * `edges` must hold `2 * count` values.
 */
enum LglsStatus lgls_planner_notify(struct LglsPlanner *planner,
                                    const uint32_t *edges,
                                    size_t count);

/**
 * Total oracle calls made by this planner so far.
 *
 * # Safety
 * `planner` must be null or valid.
 */
uint64_t lgls_planner_eval_count(const struct LglsPlanner *planner);

/**
 * Static description of a status code.
 */
const char *lgls_status_message(enum LglsStatus status);

/**
 * Message for the last failure on this thread; valid until the next
 * failing call on the same thread.
 */
const char *lgls_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LGLS_H */
