#ifndef VIDTRIAGE_H
#define VIDTRIAGE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Label ids written by [`vt_tagger_tag`].
 */
#define VT_LABEL_O 0

#define VT_LABEL_B 1

#define VT_LABEL_I 2

typedef enum VtStatus {
  VT_STATUS_OK = 0,
  VT_STATUS_NULL_ARGUMENT = 1,
  VT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or inconsistent input, including model files.
   */
  VT_STATUS_INVALID_INPUT = 3,
  VT_STATUS_IO = 4,
  /**
   * Numerical failure, e.g. text without words for readability.
   */
  VT_STATUS_NUMERIC = 5,
  VT_STATUS_PANIC = 6,
} VtStatus;

/**
 * A loaded logistic-regression classifier.
 */
typedef struct VtClassifier VtClassifier;

/**
 * A loaded tagger model.
 */
typedef struct VtTagger VtTagger;

typedef struct VtTextFeatures {
  uint64_t word_count;
  uint64_t unique_word_count;
  uint64_t sentence_count;
  uint64_t transition_word_count;
  uint64_t summary_word_count;
  uint64_t active_verb_count;
  /**
   * Flesch-Kincaid grade; 0 when `readability_defined` is false.
   */
  double readability;
  bool readability_defined;
} VtTextFeatures;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *vt_last_error(void);

/**
 * Library version as a static string.
 */
const char *vt_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void vt_string_free(char *s);

/**
 * Flesch-Kincaid grade level of `text`.
 *
 * # Safety
 * `text` is a nul-terminated string and `out` points to writable memory.
 */
enum VtStatus vt_readability(const char *text, double *out);

/**
 * Word, sentence and lexicon counts of `text` using the shipped word lists.
 *
 * # Safety
 * `text` is a nul-terminated string and `out` points to writable memory.
 */
enum VtStatus vt_text_features(const char *text, struct VtTextFeatures *out);

/**
 * Loads a tagger model file.
 *
 * # Safety
 * `path` is a nul-terminated string and `out` points to writable memory.
 */
enum VtStatus vt_tagger_load(const char *path, struct VtTagger **out);

/**
 * # Safety
 * `tagger` is null or a handle from [`vt_tagger_load`] not yet freed.
 */
void vt_tagger_free(struct VtTagger *tagger);

/**
 * Tags one tokenized sentence, writing `n_tokens` label ids
 * (`VT_LABEL_O`, `VT_LABEL_B`, `VT_LABEL_I`) to `labels`.
 *
 * # Safety
 * `tokens` points to `n_tokens` nul-terminated strings and `labels` to
 * `n_tokens` writable bytes. Both may be null when `n_tokens` is 0.
 */
enum VtStatus vt_tagger_tag(const struct VtTagger *tagger,
                            const char *const *tokens,
                            size_t n_tokens,
                            uint8_t *labels);

/**
 * Tokenizes `text`, tags every sentence and returns `token<TAB>label`
 * lines with a blank line after each sentence. Free the result with
 * [`vt_string_free`].
 *
 * # Safety
 * `text` is a nul-terminated string and `out` points to writable memory.
 */
enum VtStatus vt_tagger_tag_text(const struct VtTagger *tagger, const char *text, char **out);

/**
 * Loads a classifier model file.
 *
 * # Safety
 * `path` is a nul-terminated string and `out` points to writable memory.
 */
enum VtStatus vt_classifier_load(const char *path, struct VtClassifier **out);

/**
 * # Safety
 * `clf` is null or a handle from [`vt_classifier_load`] not yet freed.
 */
void vt_classifier_free(struct VtClassifier *clf);

/**
 * Number of input features; 0 for a null handle.
 *
 * # Safety
 * `clf` is null or a live handle.
 */
size_t vt_classifier_n_features(const struct VtClassifier *clf);

/**
 * Name of feature `i`, owned by the handle; null when out of range.
 *
 * # Safety
 * `clf` is null or a live handle.
 */
const char *vt_classifier_feature_name(const struct VtClassifier *clf, size_t i);

/**
 * Probability of the positive class for one row of raw (unscaled) feature
 * values in the order given by [`vt_classifier_feature_name`]. `label` is
 * set to 1 when the probability is at least 0.5 and may be null.
 *
 * # Safety
 * `values` points to `n_values` doubles; `probability` and `label` (if
 * non-null) point to writable memory.
 */
enum VtStatus vt_classifier_predict(const struct VtClassifier *clf,
                                    const double *values,
                                    size_t n_values,
                                    double *probability,
                                    uint8_t *label);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIDTRIAGE_H */
