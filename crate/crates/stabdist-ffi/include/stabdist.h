/* C API for the stabdist library. */

#ifndef STABDIST_H
#define STABDIST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible C-ABI call.
 */
typedef enum StabdistStatus {
  STABDIST_STATUS_OK = 0,
  STABDIST_STATUS_NULL_POINTER = 1,
  STABDIST_STATUS_INVALID_ARGUMENT = 2,
  STABDIST_STATUS_DOMAIN_ERROR = 3,
  STABDIST_STATUS_BUFFER_TOO_SMALL = 4,
  STABDIST_STATUS_INTERNAL_ERROR = 5,
} StabdistStatus;

/**
 * Lower limit convention of tail sums.
 */
typedef enum StabdistTailMode {
  STABDIST_TAIL_MODE_PAPER_LITERAL = 0,
  STABDIST_TAIL_MODE_INCLUSIVE = 1,
} StabdistTailMode;

/**
 * Opaque handle to an exact entanglement distribution.
 */
typedef struct StabdistDistribution StabdistDistribution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version string; static storage, do not free.
 */
const char *stabdist_version(void);

/**
 * JSON schema version stamped into emitted documents; static, do not free.
 */
const char *stabdist_schema_version(void);

/**
 * Retrieve the message of the most recent failure on this thread.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes (or be null for a size query);
 * `written` may be null.
 */
enum StabdistStatus stabdist_last_error_message(char *buf, size_t cap, size_t *written);

/**
 * Compute the exact entanglement distribution for a cut of `na` out of `n`
 * qubits. On success `*out` owns a handle that must be released with
 * [`stabdist_distribution_free`].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StabdistStatus stabdist_distribution_new(uint32_t n,
                                              uint32_t na,
                                              struct StabdistDistribution **out);

/**
 * Release a distribution handle; null is a no-op.
 *
 * # Safety
 * `d` must have come from [`stabdist_distribution_new`] and not be freed twice.
 */
void stabdist_distribution_free(struct StabdistDistribution *d);

/**
 * Number of entanglement levels, i.e. `min(N_A, N_B) + 1`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be valid.
 */
enum StabdistStatus stabdist_distribution_num_levels(const struct StabdistDistribution *d,
                                                     uint32_t *out);

/**
 * Exact state count at level `e` as a decimal string.
 *
 * # Safety
 * `d` must be a live handle; buffer contract as in the module docs.
 */
enum StabdistStatus stabdist_distribution_count_str(const struct StabdistDistribution *d,
                                                    uint32_t e,
                                                    char *buf,
                                                    size_t cap,
                                                    size_t *written);

/**
 * Total state count `n_tot(N)` as a decimal string.
 *
 * # Safety
 * As [`stabdist_distribution_count_str`].
 */
enum StabdistStatus stabdist_distribution_total_str(const struct StabdistDistribution *d,
                                                    char *buf,
                                                    size_t cap,
                                                    size_t *written);

/**
 * Exact probability at level `e` as a compact rational string `num/den`.
 *
 * # Safety
 * As [`stabdist_distribution_count_str`].
 */
enum StabdistStatus stabdist_distribution_probability_str(const struct StabdistDistribution *d,
                                                          uint32_t e,
                                                          char *buf,
                                                          size_t cap,
                                                          size_t *written);

/**
 * Probability at level `e` rounded to double precision.
 *
 * # Safety
 * `d` must be a live handle; `out` must be valid.
 */
enum StabdistStatus stabdist_distribution_probability_f64(const struct StabdistDistribution *d,
                                                          uint32_t e,
                                                          double *out);

/**
 * The whole distribution as a `stabdist/1` JSON document. Free the result
 * with [`stabdist_string_free`].
 *
 * # Safety
 * `d` must be a live handle; `out` must be valid.
 */
enum StabdistStatus stabdist_distribution_json(const struct StabdistDistribution *d, char **out);

/**
 * `n_tot(n)`, the total number of stabilizer states, as a decimal string.
 *
 * # Safety
 * Buffer contract as in the module docs.
 */
enum StabdistStatus stabdist_n_total_str(uint32_t n, char *buf, size_t cap, size_t *written);

/**
 * Exact average entanglement as a compact rational string `num/den`.
 *
 * # Safety
 * Buffer contract as in the module docs.
 */
enum StabdistStatus stabdist_average_str(uint32_t n,
                                         uint32_t na,
                                         char *buf,
                                         size_t cap,
                                         size_t *written);

/**
 * Average entanglement rounded to double precision.
 *
 * # Safety
 * `out` must be valid.
 */
enum StabdistStatus stabdist_average_f64(uint32_t n, uint32_t na, double *out);

/**
 * Float lower bound on the average entanglement.
 *
 * # Safety
 * `out` must be valid.
 */
enum StabdistStatus stabdist_average_lower_bound(uint32_t n, uint32_t na, double *out);

/**
 * Log-domain probability: `*out_exponent` receives the base-2 exponent,
 * `*out_probability` its power of two. Either out-pointer may be null.
 *
 * # Safety
 * Non-null out-pointers must be valid.
 */
enum StabdistStatus stabdist_probability_log2(uint32_t n,
                                              uint32_t na,
                                              uint32_t e,
                                              double *out_exponent,
                                              double *out_probability);

/**
 * Exact lower-tail report as a `stabdist/1` JSON document. `epsilon` is a
 * rational string like `"2"` or `"5/2"`. Free the result with
 * [`stabdist_string_free`].
 *
 * # Safety
 * `epsilon` must be a nul-terminated string; `out` must be valid.
 */
enum StabdistStatus stabdist_tail_json(uint32_t n,
                                       uint32_t na,
                                       const char *epsilon,
                                       enum StabdistTailMode mode,
                                       char **out);

/**
 * Gaussian-integral upper bound on the paper-literal lower tail.
 *
 * # Safety
 * `epsilon` must be a nul-terminated string; `out` must be valid.
 */
enum StabdistStatus stabdist_tail_bound(uint32_t n, uint32_t na, const char *epsilon, double *out);

/**
 * Page average for Haar-random general states, in ebits. Exact harmonic
 * accumulation for N <= 24, Kahan-summed float fallback through N = 30,
 * domain error beyond that.
 *
 * # Safety
 * `out` must be valid.
 */
enum StabdistStatus stabdist_page_average(uint32_t n, uint32_t na, double *out);

/**
 * Exact ratio `n_(N_A-1)/n_(N_A)` as a compact rational string.
 *
 * # Safety
 * Buffer contract as in the module docs.
 */
enum StabdistStatus stabdist_mode_ratio_str(uint32_t n,
                                            uint32_t na,
                                            char *buf,
                                            size_t cap,
                                            size_t *written);

/**
 * Entanglement of an explicit stabilizer state across the prefix cut of
 * `na` qubits. `generators` holds one Pauli string per newline, e.g.
 * `"XXX\nIZZ\nZZI"`; the set is validated before use.
 *
 * # Safety
 * `generators` must be a nul-terminated string; `out` must be valid.
 */
enum StabdistStatus stabdist_entanglement(const char *generators, uint32_t na, uint32_t *out);

/**
 * Canonical form of a stabilizer state, as newline-joined generator
 * strings. Two inputs generating the same signed group produce identical
 * output. Free the result with [`stabdist_string_free`].
 *
 * # Safety
 * `generators` must be a nul-terminated string; `out` must be valid.
 */
enum StabdistStatus stabdist_canonical_form(const char *generators, char **out);

/**
 * Sample `samples` uniform states with the given seed and worker count and
 * return the entanglement histogram as a `stabdist/1` JSON document. Free
 * the result with [`stabdist_string_free`].
 *
 * # Safety
 * `out` must be valid.
 */
enum StabdistStatus stabdist_sample_histogram_json(uint32_t n,
                                                   uint32_t na,
                                                   uint64_t samples,
                                                   uint64_t seed,
                                                   uint32_t workers,
                                                   char **out);

/**
 * Release a string returned through an out-pointer; null is a no-op.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void stabdist_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABDIST_H */
