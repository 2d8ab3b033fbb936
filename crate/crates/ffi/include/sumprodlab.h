#ifndef SUMPRODLAB_H
#define SUMPRODLAB_H

/* Generated by cbindgen from sumprodlab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  SPL_STATUS_OK = 0,
  SPL_STATUS_NULL_ARGUMENT = 1,
  SPL_STATUS_INVALID_UTF8 = 2,
  SPL_STATUS_PARSE_ERROR = 3,
  SPL_STATUS_EMPTY_SET = 4,
  SPL_STATUS_ZERO_ELEMENT = 5,
  SPL_STATUS_DIVISION_BY_ZERO = 6,
  SPL_STATUS_NON_POSITIVE_ELEMENT = 7,
  SPL_STATUS_INVALID_ARGUMENT = 8,
  SPL_STATUS_SET_TOO_SMALL = 9,
  SPL_STATUS_PRECONDITION_VIOLATED = 10,
  SPL_STATUS_VERIFICATION_FAILED = 11,
  SPL_STATUS_INTERNAL_PANIC = 12,
} SplStatus;

/**
 * Which pairwise set operation `spl_set_combine` applies.
 */
typedef enum {
  SPL_SET_OP_SUM = 0,
  SPL_SET_OP_DIFFERENCE = 1,
  SPL_SET_OP_PRODUCT = 2,
  SPL_SET_OP_RATIO = 3,
} SplSetOp;

/**
 * Opaque handle to an immutable sorted set of exact rationals.
 */
typedef struct SplSet SplSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a set from text in the set-file format: one element per line,
 * integers or `p/q`, `#` comments, duplicates removed.
 */
SplStatus spl_set_parse(const char *text, SplSet **out);

/**
 * Generate a set from a family spec string such as `interval:32`,
 * `geometric:2:16`, `random:1000000:64` (an embedded `seed=` wins over
 * the seed argument).
 */
SplStatus spl_set_from_family(const char *spec, uint64_t seed, SplSet **out);

/**
 * Release a set handle. Null is a no-op.
 */
void spl_set_free(SplSet *set);

/**
 * Release a string returned by this library. Null is a no-op.
 */
void spl_string_free(char *s);

/**
 * Number of elements; 0 for a null handle.
 */
size_t spl_set_len(const SplSet *set);

/**
 * The idx-th element (ascending order) as `p` or `p/q`.
 */
SplStatus spl_set_element(const SplSet *set, size_t idx, char **out);

/**
 * Membership test for a rational literal.
 */
SplStatus spl_set_contains(const SplSet *set, const char *element, bool *out);

/**
 * Pairwise combination of two sets under one of the four arithmetic
 * operations.
 */
SplStatus spl_set_combine(const SplSet *a, const SplSet *b, SplSetOp op, SplSet **out);

/**
 * Elementwise translate by a rational constant.
 */
SplStatus spl_translate(const SplSet *a, const char *shift, SplSet **out);

/**
 * Elementwise dilate by a nonzero rational constant.
 */
SplStatus spl_dilate(const SplSet *a, const char *factor, SplSet **out);

/**
 * k-fold iterated sumset, k >= 1.
 */
SplStatus spl_iterated_sumset(const SplSet *a, uint32_t k, SplSet **out);

/**
 * |A (A + pin)| (plus = true) or |A (A - pin)|.
 */
SplStatus spl_pinned_product_size(const SplSet *a, const char *pin, bool plus, char **out);

/**
 * |A(A+A)| (inner_sum = true) or |A(A-A)|.
 */
SplStatus spl_composite_expander_size(const SplSet *a, bool inner_sum, char **out);

/**
 * |{(a1+a2+a3+a4)^2 + log a5}| for a strictly positive set.
 */
SplStatus spl_five_var_expander_size(const SplSet *a, char **out);

/**
 * Additive energy E+(A,B).
 */
SplStatus spl_additive_energy(const SplSet *a, const SplSet *b, char **out);

/**
 * Multiplicative energy Ex(A,B); requires 0 outside both sets.
 */
SplStatus spl_multiplicative_energy(const SplSet *a, const SplSet *b, char **out);

/**
 * E_k(A) for rational k >= 1 (e.g. "3", "3/2"). Integer moments come
 * back exact; fractional ones as 50-significant-digit decimals.
 */
SplStatus spl_energy_moment(const SplSet *a, const char *k, char **out);

/**
 * Sum over a in A of solutions of b(c -/+ a) = b'(c' -/+ a); zero
 * products included unless nonzero_only.
 */
SplStatus spl_shifted_energy_sum(const SplSet *a,
                                 const SplSet *b,
                                 const SplSet *c,
                                 bool minus,
                                 bool nonzero_only,
                                 char **out);

/**
 * Distance-quadruple count over the squared-difference convolution.
 */
SplStatus spl_gk_distance_quadruples(const SplSet *a, char **out);

/**
 * Ordered collinear triples in the grid A x A.
 */
SplStatus spl_grid_collinear_triples(const SplSet *a, uint64_t *out);

/**
 * Best certified witness upper bound on d_*(A), as an exact rational.
 */
SplStatus spl_dstar_upper_bound(const SplSet *a, char **out);

/**
 * Popular-ratio-class certificate as a JSON document.
 */
SplStatus spl_popular_ratio_class_json(const SplSet *a, char **out);

/**
 * Energy-refinement certificate as a JSON document.
 */
SplStatus spl_refine_energy_subset_json(const SplSet *a, char **out);

/**
 * Double-pigeonhole certificate plus its d_* witness as one JSON
 * document with keys "certificate" and "witness".
 */
SplStatus spl_double_pigeonhole_json(const SplSet *a, char **out);

/**
 * Best dilation overlap as JSON (`z`, `overlap`, bound report).
 * exhaustive = false searches A^{-1} plus 1, true searches (A/A)A^{-1}.
 */
SplStatus spl_best_dilation_json(const SplSet *a, bool exhaustive, char **out);

/**
 * Exact crossover exponent of the bounds K^q n^p and n^r / K^s; all four
 * exponents are rational literals, the result is a rational string.
 */
SplStatus spl_crossover(const char *p, const char *q, const char *r, const char *s, char **out);

/**
 * Static, do not free.
 */
const char *spl_status_message(SplStatus status);

/**
 * Static library version string, do not free.
 */
const char *spl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMPRODLAB_H */
