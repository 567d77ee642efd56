#ifndef LOGIC_GMDH_H
#define LOGIC_GMDH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum LgmStatus {
  LGM_STATUS_OK = 0,
  LGM_STATUS_NULL_POINTER = 1,
  LGM_STATUS_INVALID_UTF8 = 2,
  // Malformed data, model file or configuration.
  LGM_STATUS_DATA = 3,
  LGM_STATUS_IO = 4,
  // Input vector length differs from the model's variable count.
  LGM_STATUS_DIMENSION = 5,
  // A Rust panic was caught at the boundary; the handle may be unusable.
  LGM_STATUS_PANIC = 6,
} LgmStatus;

// A trained collective.
typedef struct LgmModel LgmModel;

// Outcome of classifying one input vector.
typedef struct LgmVerdict {
  // 1 or 0 for the two classes, -1 when the collective refuses.
  int32_t decision;
  // Votes for the majority class.
  uint64_t votes_for;
  // Total votes cast.
  uint64_t total;
} LgmVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or NULL if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *lgm_last_error_message(void);

// Trains a model from a CSV file.
//
// `config_json` may be NULL for defaults, or a JSON object with any of the
// keys `mode`, `delta`, `f_ratio`, `max_layers`, `max_p`, `prune_products`,
// `chi0`, `seed`. A model whose growth stalled with errors left is still
// returned; check `lgm_model_errors`.
//
// # Safety
// `data_path` and `label` must be NUL-terminated strings, `config_json` NULL
// or NUL-terminated, and `out` a valid pointer to write the handle to.
enum LgmStatus lgm_train_csv(const char *data_path,
                             const char *label,
                             const char *config_json,
                             struct LgmModel **out);

// Loads a model from a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum LgmStatus lgm_model_load(const char *path, struct LgmModel **out);

// Parses a model from JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum LgmStatus lgm_model_from_json(const char *json, struct LgmModel **out);

// Writes the model as JSON to `path`.
//
// # Safety
// `model` must be a live handle and `path` a NUL-terminated string.
enum LgmStatus lgm_model_save(const struct LgmModel *model, const char *path);

// Releases a model handle. NULL is ignored.
//
// # Safety
// `model` must be NULL or a handle from this library not yet freed.
void lgm_model_free(struct LgmModel *model);

// Classifies one vector of `len` raw variable values.
//
// # Safety
// `model` must be a live handle, `values` must point to `len` doubles and
// `out` must be a valid pointer.
enum LgmStatus lgm_model_classify(const struct LgmModel *model,
                                  const double *values,
                                  size_t len,
                                  struct LgmVerdict *out);

// Replaces the refusal threshold χ₀ (in [0.5, 1]).
//
// # Safety
// `model` must be a live handle not used concurrently.
enum LgmStatus lgm_model_set_chi0(struct LgmModel *model, double chi0);

// Number of raw input variables a vector must have; 0 for NULL.
//
// # Safety
// `model` must be NULL or a live handle.
size_t lgm_model_num_variables(const struct LgmModel *model);

// Number of voting neurons; 0 for NULL.
//
// # Safety
// `model` must be NULL or a live handle.
size_t lgm_model_num_neurons(const struct LgmModel *model);

// Learning-set error count shared by the neurons; 0 for NULL.
//
// # Safety
// `model` must be NULL or a live handle.
size_t lgm_model_errors(const struct LgmModel *model);

// The model as JSON text, or NULL on failure. Free with `lgm_string_free`.
//
// # Safety
// `model` must be NULL or a live handle.
char *lgm_model_to_json(const struct LgmModel *model);

// The collective as IF–THEN rules, or NULL on failure. Free with
// `lgm_string_free`.
//
// # Safety
// `model` must be NULL or a live handle.
char *lgm_model_rules(const struct LgmModel *model);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string from this library not yet freed.
void lgm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGIC_GMDH_H */
