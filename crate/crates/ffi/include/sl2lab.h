#ifndef SL2LAB_H
#define SL2LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Sl2Method {
  SL2_METHOD_AUTO = 0,
  SL2_METHOD_DENSE = 1,
  SL2_METHOD_ITERATIVE = 2,
} Sl2Method;

typedef enum Sl2Status {
  SL2_STATUS_OK = 0,
  SL2_STATUS_NULL_POINTER = 1,
  SL2_STATUS_INVALID_ARGUMENT = 2,
  SL2_STATUS_PARSE = 3,
  SL2_STATUS_DOMAIN = 4,
  SL2_STATUS_NO_CONVERGENCE = 5,
  SL2_STATUS_PANIC = 6,
} Sl2Status;

/**
 * A symmetric generating set in SL₂(Z).
 */
typedef struct Sl2GenSet Sl2GenSet;

/**
 * The Cayley graph of SL₂(F_p) for a reduced generating set.
 */
typedef struct Sl2Graph Sl2Graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *sl2_last_error(void);

/**
 * # Safety
 * `s` must come from an sl2lab function returning an owned string, or be NULL.
 */
void sl2_string_free(char *s);

/**
 * Built-in set by name: "lubotzky" or "standard".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum Sl2Status sl2_genset_builtin(const char *name, struct Sl2GenSet **out);

/**
 * Parses one matrix literal per line, e.g. `[[1,3],[0,1]]`. With `close`,
 * missing inverses are added instead of rejected.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum Sl2Status sl2_genset_parse(const char *text, bool close, struct Sl2GenSet **out);

/**
 * # Safety
 * `s` must come from `sl2_genset_builtin`/`sl2_genset_parse`, or be NULL.
 */
void sl2_genset_free(struct Sl2GenSet *s);

/**
 * Number of matrices, inverses included; 0 for NULL.
 *
 * # Safety
 * `s` must be a live handle or NULL.
 */
size_t sl2_genset_len(const struct Sl2GenSet *s);

/**
 * Enclosures of γ_raw and γ = γ_raw/2⁹, rounded outward to doubles.
 *
 * # Safety
 * `s` must be a live handle; the four output pointers must be writable.
 */
enum Sl2Status sl2_gamma(const struct Sl2GenSet *s,
                         double *raw_lo,
                         double *raw_hi,
                         double *eff_lo,
                         double *eff_hi);

/**
 * The full bound report as JSON; free the string with `sl2_string_free`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum Sl2Status sl2_gap_bound_json(const struct Sl2GenSet *s, char **out);

/**
 * Enclosure of ln 3 / ln(1 + 1/3024).
 *
 * # Safety
 * `lo` and `hi` must be writable.
 */
enum Sl2Status sl2_babai_constant(double *lo, double *hi);

/**
 * Builds the Cayley graph of SL₂(F_p) for `s` reduced mod p.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum Sl2Status sl2_graph_new(uint32_t p, const struct Sl2GenSet *s, struct Sl2Graph **out);

/**
 * # Safety
 * `g` must come from `sl2_graph_new`, or be NULL.
 */
void sl2_graph_free(struct Sl2Graph *g);

/**
 * |SL₂(F_p)|; 0 for NULL.
 *
 * # Safety
 * `g` must be a live handle or NULL.
 */
uint32_t sl2_graph_order(const struct Sl2Graph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum Sl2Status sl2_graph_diameter(const struct Sl2Graph *g, uint32_t *out);

/**
 * Girth of the simple graph; 0 when it is a forest.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum Sl2Status sl2_graph_girth(const struct Sl2Graph *g, uint32_t *out);

/**
 * λ₁ = 1 − ρ⁺ and the spectral radius ρ on the orthogonal complement of constants.
 *
 * # Safety
 * `g` must be a live handle; `lambda1` and `rho` must be writable.
 */
enum Sl2Status sl2_graph_spectrum(const struct Sl2Graph *g,
                                  enum Sl2Method method,
                                  uint64_t seed,
                                  double *lambda1,
                                  double *rho);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SL2LAB_H */
