#ifndef FIXFACTOR_H
#define FIXFACTOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  FF_STATUS_OK = 0,
  FF_STATUS_NULL_ARGUMENT = 1,
  FF_STATUS_UTF8 = 2,
  FF_STATUS_FORMAT = 3,
  FF_STATUS_NAME = 4,
  FF_STATUS_CONTINUITY = 5,
  FF_STATUS_SIZE = 6,
  FF_STATUS_OTHER = 99,
} FfStatus;

/**
 * Opaque system handle.
 */
typedef struct FfSystem FfSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a system from NUL-terminated JSON. On success `*out` owns a handle
 * to release with [`ff_system_free`].
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
FfStatus ff_system_from_json(const char *json, FfSystem **out);

/**
 * # Safety
 * `sys` must come from [`ff_system_from_json`] and not be freed twice.
 */
void ff_system_free(FfSystem *sys);

/**
 * Number of points, 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t ff_system_len(const FfSystem *sys);

/**
 * Dimension of the fixed space: the number of maximal level sets.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
FfStatus ff_system_dim_fix(const FfSystem *sys, size_t *out);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
FfStatus ff_system_is_ergodic(const FfSystem *sys, bool *out);

/**
 * Decomposition report as JSON; release `*out` with [`ff_string_free`].
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
FfStatus ff_system_decompose_json(const FfSystem *sys, char **out);

/**
 * # Safety
 * `s` must be null or come from this library.
 */
void ff_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ff_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIXFACTOR_H */
