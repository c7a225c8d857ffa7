#ifndef QPROJ_H
#define QPROJ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QprojGeometryMode {
  QPROJ_GEOMETRY_MODE_STRICT,
  QPROJ_GEOMETRY_MODE_LITERAL,
} QprojGeometryMode;

typedef enum QprojKind {
  QPROJ_KIND_POSET,
  QPROJ_KIND_LATTICE,
  QPROJ_KIND_PERMUTATION,
  QPROJ_KIND_GRAPH,
  QPROJ_KIND_GRAPH_LOOPS,
  QPROJ_KIND_DIGRAPH,
  QPROJ_KIND_DIGRAPH_LOOPS,
  QPROJ_KIND_HYPERGRAPH,
  QPROJ_KIND_GEOMETRY,
} QprojKind;

typedef enum QprojReason {
  QPROJ_REASON_CHAIN,
  QPROJ_REASON_ANTICHAIN,
  QPROJ_REASON_PERMUTATION,
  QPROJ_REASON_COMPLETE,
  QPROJ_REASON_EMPTY,
  QPROJ_REASON_E_EMPTY_ALL_LOOPS,
  QPROJ_REASON_E_EMPTY_NO_LOOPS,
  QPROJ_REASON_DOWNWARD_COMPLETE,
  QPROJ_REASON_NO_LINES,
  QPROJ_REASON_ALL_PAIRS_SINGULAR,
  QPROJ_REASON_REGULAR_COVERED,
  QPROJ_REASON_NOT_CHARACTERIZED,
} QprojReason;

typedef enum QprojStatus {
  QPROJ_STATUS_OK = 0,
  QPROJ_STATUS_NULL_POINTER = 1,
  QPROJ_STATUS_INVALID_UTF8 = 2,
  QPROJ_STATUS_PARSE = 3,
  QPROJ_STATUS_INVALID_STRUCTURE = 4,
  QPROJ_STATUS_PRECONDITION = 5,
  QPROJ_STATUS_BOUND_EXCEEDED = 6,
  QPROJ_STATUS_NO_LIFT = 7,
  QPROJ_STATUS_INTERNAL = 8,
  QPROJ_STATUS_PANIC = 9,
} QprojStatus;

typedef struct QprojMapping QprojMapping;

typedef struct QprojStructure QprojStructure;

typedef struct QprojWitness QprojWitness;

typedef struct QprojVerdict {
  bool qp;
  enum QprojReason reason;
  /**
   * Largest edge size for `QPROJ_REASON_DOWNWARD_COMPLETE`, otherwise 0.
   */
  size_t edge_size;
} QprojVerdict;

typedef struct QprojOracleSummary {
  bool qp;
  uint64_t targets_examined;
  uint64_t pairs_examined;
} QprojOracleSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qproj_last_error(void);

/**
 * Parses and validates a structure file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QprojStatus qproj_structure_parse(const char *text, struct QprojStructure **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void qproj_structure_free(struct QprojStructure *s);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t qproj_structure_size(const struct QprojStructure *s);

/**
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum QprojStatus qproj_structure_kind(const struct QprojStructure *s, enum QprojKind *out);

/**
 * Canonical file text. Release the string with [`qproj_string_free`].
 *
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum QprojStatus qproj_structure_to_string(const struct QprojStructure *s, char **out);

/**
 * # Safety
 * `text` must be null or a string returned by this library.
 */
void qproj_string_free(char *text);

/**
 * Decides with the characterization for the structure's kind.
 *
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum QprojStatus qproj_decide(const struct QprojStructure *s,
                              enum QprojGeometryMode geometry_mode,
                              struct QprojVerdict *out);

/**
 * Definitional check. `max_target_size` 0 means the structure's size,
 * `jobs` 0 means 1. On a negative answer `*witness` receives the
 * counterexample, otherwise it is set to null; `witness` itself may be null.
 *
 * # Safety
 * `s` and `out` must be valid pointers; `witness` must be null or valid.
 */
enum QprojStatus qproj_oracle(const struct QprojStructure *s,
                              size_t max_target_size,
                              size_t jobs,
                              struct QprojOracleSummary *out,
                              struct QprojWitness **witness);

/**
 * Verified counterexample for a structure that is not quasi-projective;
 * `QPROJ_STATUS_PRECONDITION` otherwise.
 *
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum QprojStatus qproj_witness(const struct QprojStructure *s,
                               enum QprojGeometryMode geometry_mode,
                               struct QprojWitness **out);

/**
 * Borrowed target; lives as long as the witness.
 *
 * # Safety
 * `w` must be null or a live witness handle.
 */
const struct QprojStructure *qproj_witness_target(const struct QprojWitness *w);

/**
 * Borrowed `f`; lives as long as the witness.
 *
 * # Safety
 * `w` must be null or a live witness handle.
 */
const struct QprojMapping *qproj_witness_f(const struct QprojWitness *w);

/**
 * Borrowed `j`; lives as long as the witness.
 *
 * # Safety
 * `w` must be null or a live witness handle.
 */
const struct QprojMapping *qproj_witness_j(const struct QprojWitness *w);

/**
 * True when the class construction produced the witness rather than search.
 *
 * # Safety
 * `w` must be null or a live witness handle.
 */
bool qproj_witness_is_construction(const struct QprojWitness *w);

/**
 * # Safety
 * `w` must be null or a witness handle, not yet freed.
 */
void qproj_witness_free(struct QprojWitness *w);

/**
 * Map `x ↦ values[x]` into `0..image_size`.
 *
 * # Safety
 * `values` must point to `len` readable entries (or be null with `len` 0);
 * `out` must be valid.
 */
enum QprojStatus qproj_mapping_new(const size_t *values,
                                   size_t len,
                                   size_t image_size,
                                   struct QprojMapping **out);

/**
 * Domain size, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t qproj_mapping_len(const struct QprojMapping *m);

/**
 * Borrowed array of `qproj_mapping_len(m)` values.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
const size_t *qproj_mapping_values(const struct QprojMapping *m);

/**
 * # Safety
 * `m` must be null or a mapping handle, not yet freed.
 */
void qproj_mapping_free(struct QprojMapping *m);

/**
 * Searches an endomorphism `φ` with `j(φ(x)) = f(x)`. Returns
 * `QPROJ_STATUS_NO_LIFT` with `*out` null when none exists.
 *
 * # Safety
 * All pointers must be valid.
 */
enum QprojStatus qproj_find_lift(const struct QprojStructure *s,
                                 const struct QprojStructure *t,
                                 const struct QprojMapping *f,
                                 const struct QprojMapping *j,
                                 struct QprojMapping **out);

/**
 * Builds the lift directly for a quasi-projective source.
 *
 * # Safety
 * All pointers must be valid.
 */
enum QprojStatus qproj_construct_lift(const struct QprojStructure *s,
                                      const struct QprojStructure *t,
                                      const struct QprojMapping *f,
                                      const struct QprojMapping *j,
                                      struct QprojMapping **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPROJ_H */
