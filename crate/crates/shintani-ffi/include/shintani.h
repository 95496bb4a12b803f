/* SPDX-License-Identifier: Apache-2.0 */

#ifndef SHINTANI_H
#define SHINTANI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum ShintaniStatus {
  ShintaniStatus_Ok = 0,
  ShintaniStatus_NullPointer = 1,
  ShintaniStatus_InvalidInput = 2,
  /**
   * A computation ran but could not finish (precision, convergence).
   */
  ShintaniStatus_Computation = 3,
  /**
   * A verification ran and found a mismatch.
   */
  ShintaniStatus_CheckFailed = 4,
  ShintaniStatus_Panic = 5,
} ShintaniStatus;

/**
 * An overconvergent modular symbol.
 */
typedef struct ShintaniOcSymbol ShintaniOcSymbol;

/**
 * A solved space of classical modular symbols over `Q`.
 */
typedef struct ShintaniSymbolSpace ShintaniSymbolSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *shintani_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void shintani_string_free(char *s);

/**
 * Number of `Gamma_0(level)`-classes of forms of discriminant `disc`.
 *
 * # Safety
 * `out_count` must be valid for writes.
 */
enum ShintaniStatus shintani_class_count(uint64_t level, int64_t disc, uintptr_t *out_count);

/**
 * Class representatives as a JSON array of `[a, b, c]` triples.
 *
 * # Safety
 * `out_json` must be valid for writes.
 */
enum ShintaniStatus shintani_classes_json(uint64_t level, int64_t disc, char **out_json);

/**
 * Solves the space of weight `weight` symbols at `level` with character
 * trivial (`char_conductor` 0 or 1) or quadratic of the given conductor.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShintaniStatus shintani_symbol_space_new(uint64_t level,
                                              uint32_t weight,
                                              uint64_t char_conductor,
                                              struct ShintaniSymbolSpace **out);

/**
 * # Safety
 * `space` must be null or a live handle.
 */
uintptr_t shintani_symbol_space_dimension(const struct ShintaniSymbolSpace *space);

/**
 * # Safety
 * `space` must be null or a live handle, not used afterwards.
 */
void shintani_symbol_space_free(struct ShintaniSymbolSpace *space);

/**
 * The classical lift of basis symbol `index` up to `q^nmax` as JSON. The
 * space must have even weight `2k`; the lift uses the default character
 * of parity `(-1)^(k+1)` whose square is the space's character.
 *
 * # Safety
 * `space` must be a live handle and `out_json` valid for writes.
 */
enum ShintaniStatus shintani_theta_classical_json(const struct ShintaniSymbolSpace *space,
                                                  uintptr_t index,
                                                  uintptr_t nmax,
                                                  char **out_json);

/**
 * A random overconvergent symbol of tame level `n` at `p`, with `T`
 * moments and precision `p^m`, drawn reproducibly from `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShintaniStatus shintani_oc_symbol_random(uint64_t p,
                                              uint64_t n,
                                              uint32_t m,
                                              uint32_t t,
                                              uint64_t seed,
                                              struct ShintaniOcSymbol **out);

/**
 * # Safety
 * `sym` must be null or a live handle, not used afterwards.
 */
void shintani_oc_symbol_free(struct ShintaniOcSymbol *sym);

/**
 * The overconvergent lift up to `q^nmax` as JSON.
 *
 * # Safety
 * `sym` must be a live handle and `out_json` valid for writes.
 */
enum ShintaniStatus shintani_theta_oc_json(const struct ShintaniOcSymbol *sym,
                                           uintptr_t nmax,
                                           char **out_json);

/**
 * Checks the overconvergent Hecke formula for the primes in `ls`. Returns
 * `CheckFailed` on a mismatch; the report is written either way when
 * `out_json` is not null.
 *
 * # Safety
 * `sym` must be a live handle, `ls` must point to `nls` integers and
 * `out_json` must be null or valid for writes.
 */
enum ShintaniStatus shintani_verify_oc_hecke(const struct ShintaniOcSymbol *sym,
                                             const uint64_t *ls,
                                             uintptr_t nls,
                                             uintptr_t nmax,
                                             char **out_json);

/**
 * Checks anti-symmetry of the classical lift at `level` and weight
 * `k + 3/2` with the default character.
 *
 * # Safety
 * `out_json` must be null or valid for writes.
 */
enum ShintaniStatus shintani_verify_involution(uint64_t level,
                                               uint32_t k,
                                               uintptr_t nmax,
                                               char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHINTANI_H */
