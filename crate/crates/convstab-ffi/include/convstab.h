/* C ABI for the convstab sparse-convolution stability library. */

#ifndef CONVSTAB_H
#define CONVSTAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible FFI call.
 */
typedef enum ConvstabStatus {
  CONVSTAB_STATUS_OK = 0,
  CONVSTAB_STATUS_INVALID_INPUT = 1,
  CONVSTAB_STATUS_INDEX_OVERFLOW = 2,
  CONVSTAB_STATUS_BUDGET_EXCEEDED = 3,
  CONVSTAB_STATUS_NULL_POINTER = 4,
} ConvstabStatus;

/**
 * Opaque handle to a finitely supported complex sequence.
 */
typedef struct ConvstabSequence ConvstabSequence;

/**
 * Opaque handle to an autocorrelation Toeplitz matrix.
 */
typedef struct ConvstabToeplitz ConvstabToeplitz;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent error on this thread, or NULL when the last
 * call succeeded. Free with `convstab_string_free`.
 */
char *convstab_last_error_message(void);

/**
 * Frees a string allocated by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must have been returned by a convstab function and not yet freed.
 */
void convstab_string_free(char *s);

/**
 * Parses a sequence from its JSON form
 * `{"support":[i,...],"values":[[re,im],...]}`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum ConvstabStatus convstab_sequence_from_json(const char *json, struct ConvstabSequence **out);

/**
 * Serializes a sequence to JSON. Returns NULL on a NULL handle.
 *
 * # Safety
 * `seq` must be a live handle from this library.
 */
char *convstab_sequence_to_json(const struct ConvstabSequence *seq);

/**
 * ℓ²-norm of a sequence.
 *
 * # Safety
 * `seq` must be a live handle, `out` a valid pointer.
 */
enum ConvstabStatus convstab_sequence_norm(const struct ConvstabSequence *seq, double *out);

/**
 * Number of support points.
 *
 * # Safety
 * `seq` must be a live handle, `out` a valid pointer.
 */
enum ConvstabStatus convstab_sequence_sparsity(const struct ConvstabSequence *seq, uintptr_t *out);

/**
 * Releases a sequence handle. NULL is a no-op.
 *
 * # Safety
 * `seq` must come from this library and not be freed twice.
 */
void convstab_sequence_free(struct ConvstabSequence *seq);

/**
 * Convolution of two sequences, (x*y)_j = Σ_i x_i y_{j−i}.
 *
 * # Safety
 * `x` and `y` must be live handles, `out` a valid pointer.
 */
enum ConvstabStatus convstab_convolve(const struct ConvstabSequence *x,
                                      const struct ConvstabSequence *y,
                                      struct ConvstabSequence **out);

/**
 * Builds the autocorrelation Toeplitz matrix of a dense generator given as
 * `n` interleaved (re, im) pairs, i.e. `2n` doubles.
 *
 * # Safety
 * `interleaved` must point to `2n` readable doubles, `out` must be valid.
 */
enum ConvstabStatus convstab_toeplitz_build(const double *interleaved,
                                            uintptr_t n,
                                            struct ConvstabToeplitz **out);

/**
 * Smallest eigenvalue of the matrix.
 *
 * # Safety
 * `t` must be a live handle, `out` a valid pointer.
 */
enum ConvstabStatus convstab_toeplitz_smallest_eigenvalue(const struct ConvstabToeplitz *t,
                                                          double *out);

/**
 * Determinant-based lower bound |det B| / (√n · S^{(n−1)/2}) on the
 * smallest eigenvalue.
 *
 * # Safety
 * `t` must be a live handle, `out` a valid pointer.
 */
enum ConvstabStatus convstab_toeplitz_det_eigen_lower_bound(const struct ConvstabToeplitz *t,
                                                            double *out);

/**
 * Minimum of the symbol over a uniform grid of `grid_size` points.
 *
 * # Safety
 * `t` must be a live handle, `out` a valid pointer.
 */
enum ConvstabStatus convstab_toeplitz_symbol_min(const struct ConvstabToeplitz *t,
                                                 uintptr_t grid_size,
                                                 double *out);

/**
 * Serializes the matrix as `{"n":int,"autocorr":[[re,im],...]}`.
 *
 * # Safety
 * `t` must be a live handle from this library.
 */
char *convstab_toeplitz_to_json(const struct ConvstabToeplitz *t);

/**
 * Releases a matrix handle. NULL is a no-op.
 *
 * # Safety
 * `t` must come from this library and not be freed twice.
 */
void convstab_toeplitz_free(struct ConvstabToeplitz *t);

/**
 * β(s,f) = √min(s,f).
 */
double convstab_beta(uintptr_t s, uintptr_t f);

/**
 * Ambient dimension bound n(s,f) = (s+f−2)^{2(s+f−2)} + 1. Fails with
 * `IndexOverflow` when the value does not fit in 64 bits.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ConvstabStatus convstab_dimension_bound(uintptr_t s, uintptr_t f, uint64_t *out);

/**
 * Minimal-diameter Freiman compression of two supports given as JSON
 * integer arrays. On success writes the result JSON
 * `{"image":[...],"diameter":int,"bound_n":int,"within_bound":bool}`.
 *
 * # Safety
 * `i_json` and `j_json` must be valid NUL-terminated strings, `out_json`
 * a valid pointer; the returned string is freed by `convstab_string_free`.
 */
enum ConvstabStatus convstab_compress_support(const char *i_json,
                                              const char *j_json,
                                              char **out_json);

/**
 * Alternating-minimization upper bound on α(s,f) at ambient dimension
 * `n_eff`. Writes the report JSON produced by the core estimator.
 *
 * # Safety
 * `out_json` must be a valid pointer; free the string with
 * `convstab_string_free`.
 */
enum ConvstabStatus convstab_alpha_upper(uintptr_t s,
                                         uintptr_t f,
                                         uintptr_t n_eff,
                                         uintptr_t restarts,
                                         uint64_t seed,
                                         char **out_json);

/**
 * Determinant-chain lower-bound estimate at dimension `n_eff` with
 * `budget` multi-start restarts. Writes the estimate JSON.
 *
 * # Safety
 * `out_json` must be a valid pointer; free the string with
 * `convstab_string_free`.
 */
enum ConvstabStatus convstab_alpha_lower(uintptr_t n_eff, uintptr_t budget, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONVSTAB_H */
