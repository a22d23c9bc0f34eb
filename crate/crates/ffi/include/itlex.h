#ifndef ITLEX_H
#define ITLEX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ItlexStatus {
  ITLEX_STATUS_OK = 0,
  ITLEX_STATUS_NULL_POINTER = 1,
  ITLEX_STATUS_INVALID_UTF8 = 2,
  ITLEX_STATUS_INVALID_ARGUMENT = 3,
  ITLEX_STATUS_PARSE_ERROR = 4,
  ITLEX_STATUS_NO_HEAD = 5,
  ITLEX_STATUS_NOT_IN_VOCABULARY = 6,
  ITLEX_STATUS_MISMATCH = 7,
  ITLEX_STATUS_SMOOTHING_REQUIRED = 8,
  ITLEX_STATUS_EMPTY_VOCABULARY = 9,
  ITLEX_STATUS_IO = 10,
  ITLEX_STATUS_MODEL_FORMAT = 11,
  ITLEX_STATUS_PANIC = 12,
} ItlexStatus;

// Opaque handle to one category's network.
typedef struct ItlexModel ItlexModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, as a static string.
const char *itlex_version(void);

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library from the same thread.
const char *itlex_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void itlex_string_free(char *s);

// Creates an empty model for `category` with smoothing constant `lambda`.
//
// # Safety
// `category` must be a valid C string and `out` writable.
enum ItlexStatus itlex_model_new(const char *category, double lambda, struct ItlexModel **out);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must come from this library and not have been freed.
void itlex_model_free(struct ItlexModel *model);

// Counts one training sample of the model's category.
//
// # Safety
// `inputs` must point to `n_inputs` valid C strings; `output` must be a
// valid C string.
enum ItlexStatus itlex_model_add_sample(struct ItlexModel *model,
                                        const char *const *inputs,
                                        size_t n_inputs,
                                        const char *output);

// Writes a new model holding the summed counts of `a` and `b`.
//
// # Safety
// `a` and `b` must be live models and `out` writable.
enum ItlexStatus itlex_model_merge(const struct ItlexModel *a,
                                   const struct ItlexModel *b,
                                   struct ItlexModel **out);

// Number of samples counted so far; 0 for a null model.
//
// # Safety
// `model` must be null or a live model.
uint64_t itlex_model_n_samples(const struct ItlexModel *model);

// # Safety
// `path` must be a valid C string and `out` writable.
enum ItlexStatus itlex_model_load(const char *path, struct ItlexModel **out);

// # Safety
// `model` must be live and `path` a valid C string.
enum ItlexStatus itlex_model_save(const struct ItlexModel *model, const char *path);

// Model file text for `model`.
//
// # Safety
// `model` must be live and `out` writable.
enum ItlexStatus itlex_model_to_string(const struct ItlexModel *model, char **out);

// # Safety
// `text` must be a valid C string and `out` writable.
enum ItlexStatus itlex_model_from_string(const char *text, struct ItlexModel **out);

// Association weight between input `i` and output `j`.
//
// # Safety
// `model` must be live, `i` and `j` valid C strings, `out` writable.
enum ItlexStatus itlex_model_weight(const struct ItlexModel *model,
                                    const char *i,
                                    const char *j,
                                    double *out);

// Bias of output `j`.
//
// # Safety
// `model` must be live, `j` a valid C string, `out` writable.
enum ItlexStatus itlex_model_bias(const struct ItlexModel *model, const char *j, double *out);

// Selects the output most activated by the input set. Unknown inputs are
// ignored.
//
// # Safety
// `model` must be live, `inputs` must point to `n_inputs` valid C strings,
// `out` writable.
enum ItlexStatus itlex_model_select(const struct ItlexModel *model,
                                    const char *const *inputs,
                                    size_t n_inputs,
                                    char **out);

// Parses a bracketed f-structure and writes its canonical form.
//
// # Safety
// `text` must be a valid C string and `out` writable.
enum ItlexStatus itlex_fs_canonicalize(const char *text, char **out);

// Parses a bracketed f-structure and writes its head.
//
// # Safety
// `text` must be a valid C string and `out` writable.
enum ItlexStatus itlex_fs_head(const char *text, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ITLEX_H */
