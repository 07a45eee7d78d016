/* C interface to the hnlab slope-arithmetic library. Generated by cbindgen; do not edit. */

#ifndef HNLAB_H
#define HNLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status of a call. Zero is success; anything else leaves a message
// retrievable with `hnlab_last_error`.
typedef enum HnlabStatus {
  HNLAB_STATUS_OK = 0,
  HNLAB_STATUS_NULL_ARGUMENT = 1,
  HNLAB_STATUS_INVALID_UTF8 = 2,
  HNLAB_STATUS_INVALID_INPUT = 3,
} HnlabStatus;

// Opaque handle to a Harder-Narasimhan type.
typedef struct HnlabHn HnlabHn;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the underlying library as a static string; do not free.
const char *hnlab_version(void);

// Most recent error message on this thread, or null; free the result with
// `hnlab_string_free`.
char *hnlab_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed already.
void hnlab_string_free(char *s);

// Parses `{"summands": [{"num": .., "den": .., "mult": ..}, ..]}` into a
// handle stored in `out`.
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` must be writable.
enum HnlabStatus hnlab_hn_from_json(const char *json, struct HnlabHn **out);

// Serializes a handle back to its JSON form; free with `hnlab_string_free`.
//
// # Safety
// `h` must be a live handle from this library.
char *hnlab_hn_to_json(const struct HnlabHn *h);

// Releases a handle.
//
// # Safety
// `h` must come from this library and not have been freed already.
void hnlab_hn_free(struct HnlabHn *h);

// # Safety
// `h` must be a live handle.
struct HnlabHn *hnlab_hn_dual(const struct HnlabHn *h);

// # Safety
// `a` and `b` must be live handles.
struct HnlabHn *hnlab_hn_tensor(const struct HnlabHn *a, const struct HnlabHn *b);

// # Safety
// `h` must be a live handle.
uint64_t hnlab_hn_rank(const struct HnlabHn *h);

// # Safety
// `h` must be a live handle.
int64_t hnlab_hn_degree(const struct HnlabHn *h);

// Writes the section-space dimension to `out` and returns true, or
// returns false when it is infinite (some slope is positive).
//
// # Safety
// `h` must be a live handle; `out` must be writable.
bool hnlab_hn_h0_finite(const struct HnlabHn *h, uint64_t *out);

// Enumerates tangent slope profiles for a basic Rapoport-Zink datum and
// stores `{"enumerated": [..], "admissible": [..]}` in `out_json`;
// `slope_max` is a fraction like "1/3" or null for the default bound.
//
// # Safety
// `slope_max` must be null or a valid NUL-terminated string; `out_json`
// must be writable. Free the result with `hnlab_string_free`.
enum HnlabStatus hnlab_rz_enumerate(uint64_t height,
                                    uint64_t dim,
                                    const char *slope_max,
                                    char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HNLAB_H */
