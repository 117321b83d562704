/* Generated by cbindgen from the lumesh-ffi crate. Do not edit by hand. */

#ifndef LUMESH_H
#define LUMESH_H

/* Regenerate with `cargo build -p lumesh-ffi`. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Decomposition scheme selector.
 */
typedef enum LmScheme {
  /**
   * Triangular mesh of two-mode blocks.
   */
  LM_SCHEME_RECK = 0,
  /**
   * Rectangular mesh of two-mode blocks.
   */
  LM_SCHEME_CLEMENTS = 1,
  /**
   * Four identical fixed blocks with phase masks (3 modes only).
   */
  LM_SCHEME_MBS3 = 2,
  /**
   * Multiport-beamsplitter mesh with phase masks (3+ modes).
   */
  LM_SCHEME_BWC = 3,
} LmScheme;

/**
 * Result of every fallible call; LM_STATUS_OK means outputs were written.
 */
typedef enum LmStatus {
  /**
   * Success.
   */
  LM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LM_STATUS_NULL_POINTER = 1,
  /**
   * An argument violated a documented precondition.
   */
  LM_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Matrix or circuit dimensions do not fit the operation.
   */
  LM_STATUS_DIMENSION_ERROR = 3,
  /**
   * The matrix is not unitary within tolerance.
   */
  LM_STATUS_NOT_UNITARY = 4,
  /**
   * Text failed to parse as matrix or circuit JSON.
   */
  LM_STATUS_PARSE_ERROR = 5,
  /**
   * A row, column, or mode index is out of range.
   */
  LM_STATUS_INDEX_ERROR = 6,
  /**
   * Unexpected internal failure (including caught panics).
   */
  LM_STATUS_INTERNAL_ERROR = 7,
} LmStatus;

/**
 * Opaque circuit handle.
 */
typedef struct LmCircuit LmCircuit;

/**
 * Opaque square complex matrix handle.
 */
typedef struct LmMatrix LmMatrix;

/**
 * Component totals of a circuit.
 */
typedef struct LmComponentCounts {
  /**
   * Standalone 50:50 beamsplitters.
   */
  size_t n_bs;
  /**
   * Tunable phase shifters (standalone plus non-trivial mask entries).
   */
  size_t n_ps;
  /**
   * Phase-mask layers.
   */
  size_t n_phase_masks;
  /**
   * Fixed multiport blocks.
   */
  size_t n_fixed_mbs;
} LmComponentCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the error message of the most recent failing call on this thread.
 *
 * The pointer stays valid until the next failing call on the same thread;
 * do not free it. Returns an empty string if nothing failed yet.
 */
const char *lm_last_error_message(void);

/**
 * Frees a string returned by a *_to_json function. NULL is allowed.
 */
void lm_string_free(char *s);

/**
 * Frees a matrix handle. NULL is allowed.
 */
void lm_matrix_free(struct LmMatrix *m);

/**
 * Frees a circuit handle. NULL is allowed.
 */
void lm_circuit_free(struct LmCircuit *c);

/**
 * Builds an n x n matrix from row-major real and imaginary parts.
 *
 * `re` must point to n*n doubles; `im` may be NULL for a real matrix.
 */
enum LmStatus lm_matrix_new(size_t n, const double *re, const double *im, struct LmMatrix **out);

/**
 * Builds the n x n identity matrix.
 */
enum LmStatus lm_matrix_identity(size_t n, struct LmMatrix **out);

/**
 * Draws an n x n Haar-random unitary from the given seed.
 */
enum LmStatus lm_matrix_haar_random(size_t n, uint64_t seed, struct LmMatrix **out);

/**
 * Parses a matrix from its JSON representation.
 */
enum LmStatus lm_matrix_from_json(const char *json, struct LmMatrix **out);

/**
 * Serializes a matrix to JSON. Free the string with lm_string_free.
 */
enum LmStatus lm_matrix_to_json(const struct LmMatrix *m, char **out);

/**
 * Writes the matrix dimension to `out`.
 */
enum LmStatus lm_matrix_dim(const struct LmMatrix *m, size_t *out);

/**
 * Reads one entry (0-based row and column) into out_re/out_im.
 */
enum LmStatus lm_matrix_get(const struct LmMatrix *m,
                            size_t row,
                            size_t col,
                            double *out_re,
                            double *out_im);

/**
 * Computes the max-entry distance between two same-size matrices after
 * optimal global-phase alignment. `out_phase` may be NULL.
 */
enum LmStatus lm_matrix_distance(const struct LmMatrix *u,
                                 const struct LmMatrix *v,
                                 double *out_distance,
                                 double *out_phase);

/**
 * Decomposes a unitary matrix into a circuit under the chosen scheme.
 */
enum LmStatus lm_decompose(const struct LmMatrix *m, enum LmScheme scheme, struct LmCircuit **out);

/**
 * Multiplies out a circuit into its matrix.
 */
enum LmStatus lm_circuit_evaluate(const struct LmCircuit *c, struct LmMatrix **out);

/**
 * Parses a circuit from its JSON representation.
 */
enum LmStatus lm_circuit_from_json(const char *json, struct LmCircuit **out);

/**
 * Serializes a circuit to JSON. Free the string with lm_string_free.
 */
enum LmStatus lm_circuit_to_json(const struct LmCircuit *c, char **out);

/**
 * Writes the circuit's mode count to `out`.
 */
enum LmStatus lm_circuit_width(const struct LmCircuit *c, size_t *out);

/**
 * Tallies the circuit's components into `out`.
 */
enum LmStatus lm_circuit_counts(const struct LmCircuit *c, struct LmComponentCounts *out);

/**
 * Builds the 3x3 two-state discrimination unitary for overlap ratio delta
 * in (0, 1).
 */
enum LmStatus lm_usd_unitary(double delta, struct LmMatrix **out);

/**
 * Writes the discrimination success probability (2 b^2) for delta in
 * (0, 1) to `out`.
 */
enum LmStatus lm_usd_success_probability(double delta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LUMESH_H */
