#ifndef QACP_H
#define QACP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QacpEquivalence {
  QACP_EQUIVALENCE_STRONG = 0,
  QACP_EQUIVALENCE_BRANCHING = 1,
  QACP_EQUIVALENCE_ROOTED_BRANCHING = 2,
} QacpEquivalence;

typedef enum QacpNoise {
  QACP_NOISE_DETECTABLE_FLAG = 0,
  QACP_NOISE_BIT_FLIP = 1,
  QACP_NOISE_PHASE_FLIP = 2,
} QacpNoise;

/**
 * Result of every fallible call. `Ok` is zero; everything else is an error.
 */
typedef enum QacpStatus {
  QACP_STATUS_OK = 0,
  QACP_STATUS_NULL_ARGUMENT = 1,
  QACP_STATUS_INVALID_UTF8 = 2,
  QACP_STATUS_INVALID_ARGUMENT = 3,
  QACP_STATUS_IO = 4,
  QACP_STATUS_PARSE = 5,
  QACP_STATUS_SEMANTICS = 6,
  QACP_STATUS_VERIFY = 7,
  QACP_STATUS_SIMULATION = 8,
  QACP_STATUS_PANIC = 9,
} QacpStatus;

/**
 * A finite labelled transition system.
 */
typedef struct QacpLts QacpLts;

/**
 * A parsed `.qacp` document instantiated over its data domain.
 */
typedef struct QacpModel QacpModel;

/**
 * Summary of a verification run of the built-in protocol model.
 */
typedef struct QacpVerifySummary {
  bool passed;
  size_t encapsulated_states;
  size_t abstracted_states;
  size_t quotient_states;
  size_t external_states;
} QacpVerifySummary;

/**
 * Summary of a simulated protocol run.
 */
typedef struct QacpSimSummary {
  size_t delivered;
  bool in_order;
  double min_fidelity;
  size_t actions;
  size_t retransmissions;
  size_t noise_events;
  size_t max_live_qubits;
  /**
   * Meaningful only when conformance was requested.
   */
  bool conformant;
} QacpSimSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *qacp_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not freed before.
 */
void qacp_string_free(char *s);

/**
 * Parses and instantiates a `.qacp` document. `delta == 0` keeps the
 * document's own data domain size.
 *
 * # Safety
 * `source` is a NUL-terminated string; `out` is valid for writes.
 */
enum QacpStatus qacp_model_from_str(const char *source, uint32_t delta, struct QacpModel **out);

/**
 * Like [`qacp_model_from_str`], reading the document from `path`.
 *
 * # Safety
 * `path` is a NUL-terminated string; `out` is valid for writes.
 */
enum QacpStatus qacp_model_from_file(const char *path, uint32_t delta, struct QacpModel **out);

/**
 * Number of equations after instantiation.
 *
 * # Safety
 * `model` is null or a live model handle.
 */
size_t qacp_model_equation_count(const struct QacpModel *model);

/**
 * # Safety
 * `model` is null or a live model handle, not used afterwards.
 */
void qacp_model_free(struct QacpModel *model);

/**
 * Explores `entry` (a term over the model's equations) or, when `entry`
 * is null, the model's `init` term. `budget == 0` uses the default budget.
 *
 * # Safety
 * `model` is a live model handle; `entry` is null or a NUL-terminated
 * string; `out` is valid for writes.
 */
enum QacpStatus qacp_model_explore(const struct QacpModel *model,
                                   const char *entry,
                                   size_t budget,
                                   struct QacpLts **out);

/**
 * Reads an LTS in Aldebaran `.aut` format.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is valid for writes.
 */
enum QacpStatus qacp_lts_from_aut(const char *text, struct QacpLts **out);

/**
 * # Safety
 * `lts` is null or a live LTS handle.
 */
size_t qacp_lts_num_states(const struct QacpLts *lts);

/**
 * # Safety
 * `lts` is null or a live LTS handle.
 */
size_t qacp_lts_num_transitions(const struct QacpLts *lts);

/**
 * # Safety
 * `lts` is null or a live LTS handle.
 */
size_t qacp_lts_initial(const struct QacpLts *lts);

/**
 * `.aut` rendering of `lts`, or null if `lts` is null. Free with
 * [`qacp_string_free`].
 *
 * # Safety
 * `lts` is null or a live LTS handle.
 */
char *qacp_lts_to_aut(const struct QacpLts *lts);

/**
 * Quotient of `lts` under strong or branching bisimilarity.
 * `RootedBranching` reduces like `Branching`.
 *
 * # Safety
 * `lts` is a live LTS handle; `out` is valid for writes.
 */
enum QacpStatus qacp_lts_minimize(const struct QacpLts *lts,
                                  enum QacpEquivalence equivalence,
                                  struct QacpLts **out);

/**
 * Compares the initial states of two LTSs. On inequivalence and when
 * `counterexample` is not null, a distinguishing trace is stored there
 * (free with [`qacp_string_free`]); otherwise null is stored.
 *
 * # Safety
 * `left` and `right` are live LTS handles; `equivalent` is valid for
 * writes; `counterexample` is null or valid for writes.
 */
enum QacpStatus qacp_lts_check(const struct QacpLts *left,
                               const struct QacpLts *right,
                               enum QacpEquivalence equivalence,
                               bool *equivalent,
                               char **counterexample);

/**
 * # Safety
 * `lts` is null or a live LTS handle, not used afterwards.
 */
void qacp_lts_free(struct QacpLts *lts);

/**
 * Verifies the built-in protocol model over `delta` data values
 * (`0` selects the default). A failing verdict is still `Ok`; inspect
 * `summary->passed`. When `report_json` is not null the full report is
 * stored there as JSON (free with [`qacp_string_free`]).
 *
 * # Safety
 * `summary` is valid for writes; `report_json` is null or valid for writes.
 */
enum QacpStatus qacp_verify_qaqp(uint32_t delta,
                                 bool rooted,
                                 struct QacpVerifySummary *summary,
                                 char **report_json);

/**
 * Simulates `count` random qubits sent through a channel that corrupts
 * each message with probability `p`. `retry_cap == 0` selects the default
 * cap; `delta` is the size of the abstract data domain used in the trace.
 * With `check_conformance`, the trace is replayed against the abstract
 * model and the result stored in `summary->conformant`.
 *
 * # Safety
 * `summary` is valid for writes.
 */
enum QacpStatus qacp_simulate(double p,
                              uint64_t seed,
                              size_t count,
                              enum QacpNoise noise,
                              uint32_t delta,
                              size_t retry_cap,
                              bool check_conformance,
                              struct QacpSimSummary *summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QACP_H */
