#ifndef KVFORGE_H
#define KVFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KvfStatus {
  KVF_STATUS_OK = 0,
  KVF_STATUS_NULL_POINTER = 1,
  KVF_STATUS_INVALID_ARGUMENT = 2,
  KVF_STATUS_PARSE = 3,
  KVF_STATUS_INCONSISTENT = 4,
  KVF_STATUS_CAP_OVERFLOW = 5,
  KVF_STATUS_TRUNCATION = 6,
  KVF_STATUS_NOT_INVARIANT = 7,
  KVF_STATUS_NOT_REPRESENTATION = 8,
  KVF_STATUS_INTERNAL = 99,
} KvfStatus;

/**
 * A Lie algebra given by structure constants.
 */
typedef struct KvfAlgebra KvfAlgebra;

/**
 * A tangent pair `(β¹, β²)`.
 */
typedef struct KvfPair KvfPair;

/**
 * A truncated Lie series in two letters `x`, `y`.
 */
typedef struct KvfSeries KvfSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *kvf_last_error(void);

/**
 * Library version, a static string.
 */
const char *kvf_version(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void kvf_string_free(char *s);

/**
 * Builtin algebra by name: `heisenberg3`, `solvable2`, `sl2`, `abelianN`.
 *
 * # Safety
 * `name` is a NUL-terminated string and `out` a writable pointer.
 */
enum KvfStatus kvf_algebra_builtin(const char *name, struct KvfAlgebra **out);

/**
 * Algebra from its JSON structure constants.
 *
 * # Safety
 * As for [`kvf_algebra_builtin`].
 */
enum KvfStatus kvf_algebra_from_json(const char *text, struct KvfAlgebra **out);

/**
 * # Safety
 * `g` is a live handle, `out` writable.
 */
enum KvfStatus kvf_algebra_dim(const struct KvfAlgebra *g, size_t *out);

/**
 * # Safety
 * `g` comes from this library or is null.
 */
void kvf_algebra_free(struct KvfAlgebra *g);

/**
 * The BCH series `log(e^x e^y)` through degree `degree`.
 *
 * # Safety
 * `out` is writable.
 */
enum KvfStatus kvf_bch(size_t degree, struct KvfSeries **out);

/**
 * Coefficient of the Lyndon word `word` (e.g. `"xxy"`) as an exact string.
 *
 * # Safety
 * `s` is a live handle, `word` a C string, `out` writable.
 */
enum KvfStatus kvf_series_coeff(const struct KvfSeries *s, const char *word, char **out);

/**
 * # Safety
 * `s` is a live handle, `out` writable.
 */
enum KvfStatus kvf_series_to_json(const struct KvfSeries *s, char **out);

/**
 * # Safety
 * `text` is a C string, `out` writable.
 */
enum KvfStatus kvf_series_from_json(const char *text, struct KvfSeries **out);

/**
 * # Safety
 * `s` comes from this library or is null.
 */
void kvf_series_free(struct KvfSeries *s);

/**
 * Solves the KV equations in degrees `1..=degree`; `symmetrize` nonzero
 * applies the symmetrization.
 *
 * # Safety
 * `out` is writable.
 */
enum KvfStatus kvf_solve_kv(size_t degree, int32_t symmetrize, struct KvfPair **out);

/**
 * Component `which` (1 or 2) of the pair as a new series handle.
 *
 * # Safety
 * `p` is a live handle, `out` writable.
 */
enum KvfStatus kvf_pair_component(const struct KvfPair *p, int32_t which, struct KvfSeries **out);

/**
 * # Safety
 * `p` is a live handle, `out` writable.
 */
enum KvfStatus kvf_pair_to_json(const struct KvfPair *p, char **out);

/**
 * # Safety
 * `text` is a C string, `out` writable.
 */
enum KvfStatus kvf_pair_from_json(const char *text, struct KvfPair **out);

/**
 * # Safety
 * `p` comes from this library or is null.
 */
void kvf_pair_free(struct KvfPair *p);

/**
 * Checks version `version` (1-4) of the KV equations. Versions 1 and 4
 * need an algebra and use `cap` as the test degree; `g` may be null for
 * versions 2 and 3. Writes 1 to `is_zero` when the residual vanishes.
 *
 * # Safety
 * `p` is a live handle, `g` a live handle or null, `is_zero` writable.
 */
enum KvfStatus kvf_pair_verify(const struct KvfPair *p,
                               uint32_t version,
                               const struct KvfAlgebra *g,
                               size_t cap,
                               int32_t *is_zero);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KVFORGE_H */
