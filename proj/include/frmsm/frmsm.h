/* C interface to the frmsm fingerprint minutiae library.
 *
 * Objects are opaque handles created by frmsm_*_create / load functions and
 * released with the matching *_destroy. Every fallible call returns a
 * frmsm_status; on failure frmsm_last_error() describes it (per thread,
 * valid until the next failing call on that thread). Strings returned
 * through char** are owned by the caller and released with frmsm_string_free.
 */
#ifndef FRMSM_H
#define FRMSM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FRMSM_BUILDING)
#    define FRMSM_API __declspec(dllexport)
#  else
#    define FRMSM_API __declspec(dllimport)
#  endif
#else
#  define FRMSM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frmsm_status {
  FRMSM_OK = 0,
  FRMSM_ERR_FILE_NOT_FOUND = 1,
  FRMSM_ERR_UNSUPPORTED_FORMAT = 2,
  FRMSM_ERR_MALFORMED_HEADER = 3,
  FRMSM_ERR_IO = 4,
  FRMSM_ERR_OUT_OF_BOUNDS = 5,
  FRMSM_ERR_MARGIN_TOO_LARGE = 6,
  FRMSM_ERR_ITERATION_LIMIT = 7,
  FRMSM_ERR_NOT_RIDGE_PIXEL = 8,
  FRMSM_ERR_ON_BORDER = 9,
  FRMSM_ERR_NOT_THINNED = 10,
  FRMSM_ERR_NOT_TERMINATION = 11,
  FRMSM_ERR_NOT_BIFURCATION = 12,
  FRMSM_ERR_VALLEY_NOT_FOUND = 13,
  FRMSM_ERR_MALFORMED_CSV = 14,
  FRMSM_ERR_EMPTY_SET = 15,
  FRMSM_ERR_BAD_INDEX = 16,
  FRMSM_ERR_EMPTY_TEMPLATE = 17,
  FRMSM_ERR_EMPTY_INPUT = 18,
  FRMSM_ERR_EMPTY_MANIFEST = 19,
  FRMSM_ERR_INVALID_MANIFEST = 20,
  FRMSM_ERR_NEED_TWO_IDENTITIES = 21,
  FRMSM_ERR_PIPELINE = 22,
  FRMSM_ERR_INVALID_CONFIG = 23,
  FRMSM_ERR_INVALID_ARGUMENT = 24,
  FRMSM_ERR_INTERNAL = 99
} frmsm_status;

typedef enum frmsm_image_kind {
  FRMSM_IMAGE_GRAY = 0,
  FRMSM_IMAGE_BINARY = 1
} frmsm_image_kind;

typedef struct frmsm_config frmsm_config;
typedef struct frmsm_image frmsm_image;
typedef struct frmsm_minutiae frmsm_minutiae;
typedef struct frmsm_evaluation frmsm_evaluation;

typedef struct frmsm_minutia {
  int32_t row;
  int32_t col;
  double theta;   /* degrees in [0,360) */
  int32_t type;   /* 1 termination, 3 bifurcation */
} frmsm_minutia;

typedef struct frmsm_match_result {
  uint64_t matched;
  uint64_t nt;
  uint64_t ni;
  double score;
  int32_t ref_template;
  int32_t ref_input;
  int32_t is_match; /* score > decision threshold */
} frmsm_match_result;

FRMSM_API const char* frmsm_last_error(void);
FRMSM_API const char* frmsm_status_name(frmsm_status status);
FRMSM_API void frmsm_string_free(char* s);

/* Configuration: pipeline and matcher settings, keyed as in config files
 * (threshold, auto_threshold, margin, trace_len, valley_window,
 * max_iterations, r_tol, phi_tol, theta_tol, require_same_type,
 * decision_threshold). */
FRMSM_API frmsm_status frmsm_config_create(frmsm_config** out);
FRMSM_API void frmsm_config_destroy(frmsm_config* cfg);
FRMSM_API frmsm_status frmsm_config_set(frmsm_config* cfg, const char* key, const char* value);
FRMSM_API frmsm_status frmsm_config_load_file(frmsm_config* cfg, const char* path);
FRMSM_API frmsm_status frmsm_config_validate(const frmsm_config* cfg);
/* Current value of a numeric or boolean (1/0) setting. */
FRMSM_API frmsm_status frmsm_config_get_double(const frmsm_config* cfg, const char* key,
                                               double* out);

/* Images */
FRMSM_API frmsm_status frmsm_image_load(const char* path, frmsm_image** out);
FRMSM_API frmsm_status frmsm_image_create(int32_t width, int32_t height, frmsm_image_kind kind,
                                          const uint8_t* pixels, frmsm_image** out);
FRMSM_API void frmsm_image_destroy(frmsm_image* img);
FRMSM_API frmsm_status frmsm_image_info(const frmsm_image* img, int32_t* width, int32_t* height,
                                        frmsm_image_kind* kind);
/* Copies width*height row-major pixel values into buf. */
FRMSM_API frmsm_status frmsm_image_pixels(const frmsm_image* img, uint8_t* buf, size_t len);
/* Binary images are written with 0 -> 0 and 1 -> 255. */
FRMSM_API frmsm_status frmsm_image_save(const frmsm_image* img, const char* path);
/* Gray image to binary by intensity >= 128; binary input is copied. */
FRMSM_API frmsm_status frmsm_image_to_binary(const frmsm_image* img, frmsm_image** out);
FRMSM_API frmsm_status frmsm_invert(const frmsm_image* binary, frmsm_image** out);

/* Preprocessing */
FRMSM_API frmsm_status frmsm_binarize(const frmsm_image* gray, const frmsm_config* cfg,
                                      frmsm_image** out);
FRMSM_API frmsm_status frmsm_whiten_boundary(const frmsm_image* binary, int32_t margin,
                                             frmsm_image** out);
FRMSM_API frmsm_status frmsm_thin(const frmsm_image* binary, const frmsm_config* cfg,
                                  frmsm_image** out);

/* Minutiae */
FRMSM_API frmsm_status frmsm_crossing_number(const frmsm_image* skeleton, int32_t row,
                                             int32_t col, int32_t* out);
FRMSM_API frmsm_status frmsm_extract(const frmsm_image* skeleton, const frmsm_config* cfg,
                                     frmsm_minutiae** out);
/* Full binarize -> thin -> extract pipeline on a gray image. */
FRMSM_API frmsm_status frmsm_extract_image(const frmsm_image* gray, const frmsm_config* cfg,
                                           frmsm_minutiae** out);
/* A .csv path is read as a data matrix, anything else as an image. */
FRMSM_API frmsm_status frmsm_minutiae_load(const char* path, const frmsm_config* cfg,
                                           frmsm_minutiae** out);
FRMSM_API frmsm_status frmsm_minutiae_load_csv(const char* path, frmsm_minutiae** out);
FRMSM_API frmsm_status frmsm_minutiae_save_csv(const frmsm_minutiae* set, const char* path);
FRMSM_API frmsm_status frmsm_minutiae_to_csv(const frmsm_minutiae* set, char** out);
FRMSM_API frmsm_status frmsm_minutiae_create(const frmsm_minutia* items, size_t count,
                                             frmsm_minutiae** out);
FRMSM_API void frmsm_minutiae_destroy(frmsm_minutiae* set);
FRMSM_API size_t frmsm_minutiae_count(const frmsm_minutiae* set);
FRMSM_API frmsm_status frmsm_minutiae_get(const frmsm_minutiae* set, size_t index,
                                          frmsm_minutia* out);
FRMSM_API frmsm_status frmsm_render_overlay(const frmsm_image* gray, const frmsm_minutiae* set,
                                            const char* path);

/* Matching */
FRMSM_API frmsm_status frmsm_match(const frmsm_minutiae* tpl, const frmsm_minutiae* input,
                                   const frmsm_config* cfg, frmsm_match_result* out);
/* Single-line key-sorted JSON: decision, matched, ni, nt, ref_pair, score. */
FRMSM_API frmsm_status frmsm_match_result_json(const frmsm_match_result* result, char** out);

/* Evaluation over a JSON manifest */
FRMSM_API frmsm_status frmsm_evaluate(const char* manifest_path, const frmsm_config* cfg,
                                      frmsm_evaluation** out);
FRMSM_API void frmsm_evaluation_destroy(frmsm_evaluation* eval);
FRMSM_API frmsm_status frmsm_evaluation_rates(const frmsm_evaluation* eval, double threshold,
                                              double* fmr, double* fnmr);
FRMSM_API frmsm_status frmsm_evaluation_report_json(const frmsm_evaluation* eval,
                                                    double threshold, char** out);
FRMSM_API frmsm_status frmsm_evaluation_attempts_csv(const frmsm_evaluation* eval,
                                                     double threshold, char** out);
FRMSM_API frmsm_status frmsm_evaluation_sweep_csv(const frmsm_evaluation* eval, double start,
                                                  double stop, double step, char** out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif /* FRMSM_H */
