#ifndef KKSCHUR_H
#define KKSCHUR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KksStatus {
  KKS_STATUS_OK = 0,
  KKS_STATUS_NULL_POINTER = 1,
  KKS_STATUS_INVALID_UTF8 = 2,
  KKS_STATUS_PARSE = 3,
  KKS_STATUS_INVALID_INPUT = 4,
  KKS_STATUS_BUDGET_EXCEEDED = 5,
  KKS_STATUS_NOT_DIVISIBLE = 6,
  KKS_STATUS_INTERNAL = 7,
  KKS_STATUS_PANIC = 8,
} KksStatus;

/**
 * An expansion table for one level `k`.
 */
typedef struct KksContext KksContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread. Owned by the library and
 * valid until the next call on the same thread.
 */
const char *kks_last_error(void);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum KksStatus kks_context_new(size_t k, struct KksContext **out);

/**
 * # Safety
 * `ctx` must come from [`kks_context_new`] and not be used afterwards.
 */
void kks_context_free(struct KksContext *ctx);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void kks_string_free(char *s);

/**
 * The (k+1)-core of a k-bounded partition, as text.
 *
 * # Safety
 * Pointers must be valid; `shape` must be NUL-terminated.
 */
enum KksStatus kks_core(const struct KksContext *ctx, const char *shape, char **out);

/**
 * The k-bounded partition of a (k+1)-core, as text.
 *
 * # Safety
 * Pointers must be valid; `shape` must be NUL-terminated.
 */
enum KksStatus kks_bdd(const struct KksContext *ctx, const char *shape, char **out);

/**
 * # Safety
 * Pointers must be valid; `shape` must be NUL-terminated.
 */
enum KksStatus kks_kconj(const struct KksContext *ctx, const char *shape, char **out);

/**
 * `kks{shape}` in the h-basis, one term per line.
 *
 * # Safety
 * Pointers must be valid; `shape` must be NUL-terminated.
 */
enum KksStatus kks_expand(const struct KksContext *ctx, const char *shape, char **out);

/**
 * Checks `kks{R_t ∪ λ} = kks{R_t} Σ kks{ν}`; writes 1 to `pass` on success.
 *
 * # Safety
 * Pointers must be valid; `lambda` must be NUL-terminated.
 */
enum KksStatus kks_verify_samek(const struct KksContext *ctx,
                                const char *lambda,
                                size_t t,
                                int32_t *pass);

/**
 * Checks `kks{R_t^a} = kks{R_t} (Σ_{λ ⊆ R_t} kks{λ})^{a-1}`.
 *
 * # Safety
 * `ctx` and `pass` must be valid.
 */
enum KksStatus kks_verify_rta(const struct KksContext *ctx, size_t t, size_t a, int32_t *pass);

/**
 * The binomial folding identity at `(q, a, b)`.
 *
 * # Safety
 * `pass` must be valid.
 */
enum KksStatus kks_binom_fold(int64_t q, int64_t a, int64_t b, int32_t *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KKSCHUR_H */
