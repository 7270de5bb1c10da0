#ifndef XRAT_H
#define XRAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum XratStatus {
  XRAT_STATUS_OK = 0,
  XRAT_STATUS_NULL_POINTER = 1,
  // Malformed input: cycle notation, JSON, point syntax.
  XRAT_STATUS_PARSE = 2,
  // Well-formed input outside the domain of the operation.
  XRAT_STATUS_PRECONDITION = 3,
  XRAT_STATUS_CAP_EXCEEDED = 4,
  // The result does not fit the output type.
  XRAT_STATUS_OVERFLOW = 5,
  XRAT_STATUS_INVALID_UTF8 = 6,
  XRAT_STATUS_BUFFER_TOO_SMALL = 7,
  // A panic was caught at the boundary.
  XRAT_STATUS_INTERNAL = 8,
} XratStatus;

typedef enum XratVerdictKind {
  XRAT_VERDICT_KIND_RATIONAL = 0,
  XRAT_VERDICT_KIND_NOT_UNIRATIONAL = 1,
} XratVerdictKind;

typedef struct XratGroup XratGroup;

typedef struct XratVerdict XratVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a group from `count` generators in cycle notation.
//
// # Safety
// `gens` must point to `count` NUL-terminated strings (it may be null when
// `count` is 0) and `out` must be writable.
enum XratStatus xrat_group_new(size_t degree,
                               const char *const *gens,
                               size_t count,
                               struct XratGroup **out);

// Builds a group from `{"degree": n, "generators": ["(1 2)", ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` must be writable.
enum XratStatus xrat_group_from_json(const char *json, struct XratGroup **out);

// # Safety
// `group` must be null or a handle from this library not yet freed.
void xrat_group_free(struct XratGroup *group);

// # Safety
// `group` must be a live handle and `out` writable.
enum XratStatus xrat_group_degree(const struct XratGroup *group, size_t *out);

// Group order; `XRAT_STATUS_OVERFLOW` when it exceeds `uint64_t`.
//
// # Safety
// `group` must be a live handle and `out` writable.
enum XratStatus xrat_group_order(const struct XratGroup *group, uint64_t *out);

// # Safety
// `group` must be a live handle, `perm` a NUL-terminated string and `out`
// writable.
enum XratStatus xrat_group_contains(const struct XratGroup *group, const char *perm, bool *out);

// Writes the orbit sizes, ordered by least member, into `buf`. `out_len`
// always receives the number of orbits; if it exceeds `cap` nothing is
// written and `XRAT_STATUS_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `group` must be a live handle, `buf` must hold `cap` entries (or be null
// when `cap` is 0) and `out_len` writable.
enum XratStatus xrat_group_orbit_sizes(const struct XratGroup *group,
                                       size_t *buf,
                                       size_t cap,
                                       size_t *out_len);

// Decides rationality and returns the verdict with its certificate.
//
// # Safety
// `group` must be a live handle and `out` writable.
enum XratStatus xrat_decide(const struct XratGroup *group, struct XratVerdict **out);

// # Safety
// `verdict` must be a live handle and `out` writable.
enum XratStatus xrat_verdict_kind(const struct XratVerdict *verdict, enum XratVerdictKind *out);

// Re-checks the certificate against `group`.
//
// # Safety
// Both handles must be live.
enum XratStatus xrat_verdict_validate(const struct XratVerdict *verdict,
                                      const struct XratGroup *group);

// # Safety
// `verdict` must be a live handle and `out` writable. Release the string
// with `xrat_string_free`.
enum XratStatus xrat_verdict_to_json(const struct XratVerdict *verdict, char **out);

// # Safety
// `verdict` must be null or a handle from this library not yet freed.
void xrat_verdict_free(struct XratVerdict *verdict);

// Cross-ratio of four points written as `"n"`, `"n/d"` or `"inf"`. The
// result uses the same notation.
//
// # Safety
// The four inputs must be NUL-terminated strings and `out` writable.
// Release the string with `xrat_string_free`.
enum XratStatus xrat_cross_ratio(const char *p1,
                                 const char *p2,
                                 const char *p3,
                                 const char *p4,
                                 char **out);

// Sets the process-wide limit on explicit element enumeration.
void xrat_set_enumeration_cap(size_t cap);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void xrat_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call into the library on the same thread.
const char *xrat_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XRAT_H */
