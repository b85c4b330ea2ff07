#ifndef BIGMCG_H
#define BIGMCG_H

/* Generated by cbindgen from the bigmcg-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum BigmcgStatus {
  /**
   * Success; for verdict-producing calls this means `Verified`.
   */
  BIGMCG_OK = 0,
  /**
   * A refuted identity or a failed suite step.
   */
  BIGMCG_REFUTED = 1,
  /**
   * The layered check could not decide within the window and budget.
   */
  BIGMCG_UNKNOWN = 2,
  BIGMCG_PARSE_ERROR = 3,
  BIGMCG_USAGE_ERROR = 4,
  BIGMCG_NULL_POINTER = 5,
  BIGMCG_INVALID_UTF8 = 6,
  BIGMCG_INTERNAL_ERROR = 7,
} BigmcgStatus;

/**
 * Opaque engine handle: the atlas for a fixed number of ends.
 */
typedef struct bigmcg_engine bigmcg_engine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *bigmcg_version(void);

/**
 * Creates an engine for `ends >= 3` ends.
 *
 * # Safety
 * `out` must be a valid pointer to an engine pointer.
 */
enum BigmcgStatus bigmcg_engine_new(uint32_t ends, struct bigmcg_engine **out);

/**
 * Releases an engine created by [`bigmcg_engine_new`].
 *
 * # Safety
 * `engine` must be null or a pointer returned by `bigmcg_engine_new` that
 * has not been freed yet.
 */
void bigmcg_engine_free(struct bigmcg_engine *engine);

/**
 * Number of ends the engine was built for; 0 on a null handle.
 *
 * # Safety
 * `engine` must be null or a live engine pointer.
 */
uint32_t bigmcg_engine_ends(const struct bigmcg_engine *engine);

/**
 * Releases a string returned through a `char **` out-parameter.
 *
 * # Safety
 * `s` must be null or a string pointer produced by this library.
 */
void bigmcg_string_free(char *s);

/**
 * Parses a word; on success writes its canonical rendering.
 *
 * # Safety
 * `engine` must be a live engine pointer; `word` a valid string;
 * `canonical_out` null or valid for writing one pointer.
 */
enum BigmcgStatus bigmcg_parse_check(const struct bigmcg_engine *engine,
                                     const char *word,
                                     char **canonical_out);

/**
 * Layered shadow equality of two words. `detail_out` (optional) receives
 * the verdict text, including any witness.
 *
 * # Safety
 * `engine` must be a live engine pointer; `w1`, `w2` valid strings;
 * `detail_out` null or valid for writing one pointer.
 */
enum BigmcgStatus bigmcg_equal(const struct bigmcg_engine *engine,
                               const char *w1,
                               const char *w2,
                               uint32_t window,
                               uint64_t budget,
                               char **detail_out);

/**
 * Truncated triviality of one word.
 *
 * # Safety
 * As for [`bigmcg_equal`].
 */
enum BigmcgStatus bigmcg_trivial(const struct bigmcg_engine *engine,
                                 const char *word,
                                 uint32_t window,
                                 char **detail_out);

/**
 * Applies a word to an atlas curve. Returns `BIGMCG_OK` when the image
 * fully reduces, `BIGMCG_UNKNOWN` when it stays suspended; either way the
 * term text goes to `image_out` when provided.
 *
 * # Safety
 * As for [`bigmcg_equal`]; `curve` must be a valid string.
 */
enum BigmcgStatus bigmcg_curve_image(const struct bigmcg_engine *engine,
                                     const char *word,
                                     const char *curve,
                                     uint64_t budget,
                                     char **image_out);

/**
 * Genus flux of a pure word across the cut around `end`. Writes the value
 * through `value_out`; `BIGMCG_UNKNOWN` when undefined.
 *
 * # Safety
 * `engine` live, `word` a valid string, `value_out` valid for one i64.
 */
enum BigmcgStatus bigmcg_phi(const struct bigmcg_engine *engine,
                             uint32_t end,
                             const char *word,
                             uint32_t window,
                             int64_t *value_out);

/**
 * Full flux vector of a pure word: writes `ends` coordinates into
 * `coords_out`, which must hold at least `coords_len >= ends` entries.
 *
 * # Safety
 * `engine` live, `word` valid, `coords_out` valid for `coords_len` i64s.
 */
enum BigmcgStatus bigmcg_flux(const struct bigmcg_engine *engine,
                              const char *word,
                              uint32_t window,
                              int64_t *coords_out,
                              size_t coords_len);

/**
 * Runs a catalog suite and hands back the full line report. Returns
 * `BIGMCG_OK` when every step passes, `BIGMCG_REFUTED` when any step
 * fails, `BIGMCG_UNKNOWN` otherwise.
 *
 * # Safety
 * `engine` live, `name` valid, `report_out` null or valid for one pointer.
 */
enum BigmcgStatus bigmcg_suite_run(const struct bigmcg_engine *engine,
                                   const char *name,
                                   uint32_t window,
                                   uint64_t seed,
                                   char **report_out);

/**
 * The metric-lab demo on the complete graph: Cauchy bounds for the
 * forward and inverse families plus the limit certificate, as a text
 * report. `BIGMCG_OK` when the demo expectation (forward Cauchy, inverse
 * not) is met.
 *
 * # Safety
 * `report_out` must be null or valid for writing one pointer.
 */
enum BigmcgStatus bigmcg_metric_demo(uint64_t threshold, uint64_t depth, char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIGMCG_H */
