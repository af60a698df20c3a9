#ifndef FRQA_H
#define FRQA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FrqaStatus {
  FRQA_STATUS_OK = 0,
  FRQA_STATUS_NULL_POINTER = 1,
  FRQA_STATUS_RANGE = 2,
  FRQA_STATUS_SHAPE = 3,
  FRQA_STATUS_RESOURCE = 4,
  FRQA_STATUS_WIRING = 5,
  FRQA_STATUS_PARSE = 6,
  FRQA_STATUS_IO = 7,
  FRQA_STATUS_BUFFER_TOO_SMALL = 8,
  FRQA_STATUS_PANIC = 9,
  FRQA_STATUS_OTHER = 10,
} FrqaStatus;

typedef enum FrqaCostModel {
  FRQA_COST_MODEL_STANDARD = 0,
  FRQA_COST_MODEL_ALL_GATES = 1,
} FrqaCostModel;

/**
 * Opaque prepared state.
 */
typedef struct FrqaState FrqaState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Prepares a state from `len` samples at resolution `q`.
 *
 * # Safety
 * `samples` must point to `len` readable values; `out` must be writable.
 */
enum FrqaStatus frqa_prepare(const int64_t *samples,
                             size_t len,
                             uint32_t q,
                             struct FrqaState **out);

/**
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void frqa_state_free(struct FrqaState *state);

/**
 * Amplitude resolution, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
uint32_t frqa_state_q(const struct FrqaState *state);

/**
 * # Safety
 * `state` must be null or a live handle.
 */
uint32_t frqa_state_l(const struct FrqaState *state);

/**
 * Number of qubits in the state.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t frqa_state_width(const struct FrqaState *state);

/**
 * Writes the 2^l samples into `buf`. `written` receives the sample count
 * even when the buffer is too small.
 *
 * # Safety
 * `buf` must have room for `cap` values; `written` may be null.
 */
enum FrqaStatus frqa_retrieve(const struct FrqaState *state,
                              int64_t *buf,
                              size_t cap,
                              size_t *written);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum FrqaStatus frqa_invert(const struct FrqaState *state, struct FrqaState **out);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum FrqaStatus frqa_delay(const struct FrqaState *state, uint64_t dt, struct FrqaState **out);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum FrqaStatus frqa_reverse(const struct FrqaState *state, struct FrqaState **out);

/**
 * Reverses the samples whose time bits match `restriction`, written as
 * `position=bit` pairs separated by commas, e.g. `"0=1"`.
 *
 * # Safety
 * `restriction` must be a nul-terminated string; `out` writable.
 */
enum FrqaStatus frqa_reverse_restricted(const struct FrqaState *state,
                                        const char *restriction,
                                        struct FrqaState **out);

/**
 * Sample-wise sum at resolution q+1.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum FrqaStatus frqa_add(const struct FrqaState *x,
                         const struct FrqaState *y,
                         struct FrqaState **out);

/**
 * Cost report for `op` (`add`, `invert`, `delay:N`, `reverse`,
 * `restricted-reverse:P=V,...`) as JSON. Free with `frqa_string_free`.
 *
 * # Safety
 * `op` must be a nul-terminated string; `out` writable.
 */
enum FrqaStatus frqa_cost_report_json(const char *op,
                                      uint32_t q,
                                      uint32_t l,
                                      enum FrqaCostModel model,
                                      char **out);

/**
 * State dump as JSON. Free with `frqa_string_free`.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum FrqaStatus frqa_state_to_json(const struct FrqaState *state, char **out);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` writable.
 */
enum FrqaStatus frqa_state_from_json(const char *json, struct FrqaState **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void frqa_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *frqa_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRQA_H */
