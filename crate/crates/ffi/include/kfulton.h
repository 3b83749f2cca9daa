#ifndef KFULTON_H
#define KFULTON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The first four values match the CLI exit codes.
 */
typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_PROPERTY_VIOLATION = 1,
  KF_STATUS_INPUT_ERROR = 2,
  KF_STATUS_RESOURCE_LIMIT = 3,
  KF_STATUS_NULL_ARGUMENT = 4,
  KF_STATUS_BUFFER_TOO_SMALL = 5,
  KF_STATUS_PANIC = 6,
} KfStatus;

/**
 * A computed Fulton class.
 */
typedef struct KfFulton KfFulton;

/**
 * A parsed and validated scheme file.
 */
typedef struct KfSpec KfSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a scheme file given as a NUL-terminated JSON string.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum KfStatus kf_spec_from_json(const char *json, struct KfSpec **out);

/**
 * # Safety
 * `spec` must be null or a handle from [`kf_spec_from_json`] not yet freed.
 */
void kf_spec_free(struct KfSpec *spec);

/**
 * Number of ambient coordinates.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
uintptr_t kf_spec_dim(const struct KfSpec *spec);

/**
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum KfStatus kf_fulton_class(const struct KfSpec *spec, struct KfFulton **out);

/**
 * Degree of the class in `t`, or 0 for a null handle.
 *
 * # Safety
 * `class` must be null or a live handle.
 */
uintptr_t kf_fulton_degree(const struct KfFulton *class_);

/**
 * Copies the coefficients, lowest degree first, into `buf`.
 *
 * `*len` receives the number of coefficients even when `cap` is too small,
 * in which case nothing is written and `BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `class` must be a live handle, `buf` must hold `cap` values and `len`
 * must be a valid pointer.
 */
enum KfStatus kf_fulton_coeffs(const struct KfFulton *class_,
                               int64_t *buf,
                               uintptr_t cap,
                               uintptr_t *len);

/**
 * The class as a JSON object. Release the string with [`kf_string_free`].
 *
 * # Safety
 * `class` must be a live handle and `out` a valid pointer.
 */
enum KfStatus kf_fulton_to_json(const struct KfFulton *class_, char **out);

/**
 * # Safety
 * `class` must be null or a handle from [`kf_fulton_class`] not yet freed.
 */
void kf_fulton_free(struct KfFulton *class_);

/**
 * Virtual Euler characteristic from the sections of the scheme file,
 * checked against the Koszul homology.
 *
 * Returns `PROPERTY_VIOLATION` when any check fails; `*out` still holds
 * the homological value.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum KfStatus kf_virtual_chi(const struct KfSpec *spec, int64_t *out);

/**
 * Message for the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *kf_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void kf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KFULTON_H */
