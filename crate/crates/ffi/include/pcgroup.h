#ifndef PCGROUP_H
#define PCGROUP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum PcgStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  PCG_STATUS_OK = 0,
  PCG_STATUS_PARSE_ERROR = 1,
  PCG_STATUS_INVALID_INPUT = 2,
  PCG_STATUS_DOMAIN_ERROR = 3,
  PCG_STATUS_GUARD_EXCEEDED = 4,
  PCG_STATUS_INVARIANT_VIOLATED = 5,
  PCG_STATUS_IO_ERROR = 6,
  PCG_STATUS_NULL_POINTER = 7,
  PCG_STATUS_INVALID_UTF8 = 8,
  PCG_STATUS_PANIC = 9,
};
#ifndef __cplusplus
typedef int32_t PcgStatus;
#endif // __cplusplus

/**
 * Opaque commutation graph.
 */
typedef struct PcgGraph PcgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses graph text (`gens: a b c` / `edge: a b` lines) into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
PcgStatus pcg_graph_parse(const char *text, struct PcgGraph **out);

/**
 * # Safety
 * `g` must come from `pcg_graph_parse` and not be freed twice. Null is ignored.
 */
void pcg_graph_free(struct PcgGraph *g);

/**
 * Number of generators, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t pcg_graph_size(const struct PcgGraph *g);

/**
 * Canonical form of `word`; `"1"` for the identity.
 *
 * # Safety
 * Pointers must be valid; `*out` must later go to `pcg_string_free`.
 */
PcgStatus pcg_normalize(const struct PcgGraph *g, const char *word, char **out);

/**
 * # Safety
 * Pointers must be valid.
 */
PcgStatus pcg_equals(const struct PcgGraph *g, const char *u, const char *v, bool *out);

/**
 * # Safety
 * Pointers must be valid.
 */
PcgStatus pcg_is_geodesic(const struct PcgGraph *g, const char *word, bool *out);

/**
 * `{"conjugate": bool, "conjugator": word|null}` with conjugator·u·conjugator⁻¹ = v.
 *
 * # Safety
 * Pointers must be valid; `*out` must later go to `pcg_string_free`.
 */
PcgStatus pcg_conjugate_json(const struct PcgGraph *g, const char *u, const char *v, char **out);

/**
 * Centraliser description as JSON (conjugator, core, cyclic_parts,
 * abelian_part, generators, cyclic).
 *
 * # Safety
 * Pointers must be valid; `*out` must later go to `pcg_string_free`.
 */
PcgStatus pcg_centralizer_json(const struct PcgGraph *g, const char *word, char **out);

/**
 * `{"root": word, "exponent": n}` with root^n = word and n maximal.
 *
 * # Safety
 * Pointers must be valid; `*out` must later go to `pcg_string_free`.
 */
PcgStatus pcg_root_json(const struct PcgGraph *g, const char *word, char **out);

/**
 * All solutions of a system (same text format as the CLI) with values in
 * the ball of `radius`, as JSON. `max_checks` = 0 selects the default guard.
 *
 * # Safety
 * Pointers must be valid; `*out` must later go to `pcg_string_free`.
 */
PcgStatus pcg_solve_json(const struct PcgGraph *g,
                         const char *system,
                         size_t radius,
                         uint64_t max_checks,
                         char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void pcg_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *pcg_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PCGROUP_H */
