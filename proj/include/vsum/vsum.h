/*
 * vsum C API: saliency-based two-scale fusion of a video's first frame and
 * its temporal average into one representative image.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function (NULL is accepted and ignored). Every function
 * that can fail returns a vsum_status; on failure a description is available
 * from vsum_last_error() on the same thread until the next failing call.
 * Handles are immutable after creation except vsum_config; distinct handles
 * may be used from different threads concurrently.
 */
#ifndef VSUM_VSUM_H
#define VSUM_VSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(VSUM_BUILDING_LIBRARY)
#    define VSUM_API __declspec(dllexport)
#  else
#    define VSUM_API __declspec(dllimport)
#  endif
#else
#  define VSUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vsum_status {
  VSUM_OK = 0,
  VSUM_ERR_INPUT_SHAPE = 1,
  VSUM_ERR_PARAMETER = 2,
  VSUM_ERR_NO_FRAMES = 3,
  VSUM_ERR_INCONSISTENT_FRAMES = 4,
  VSUM_ERR_FORMAT = 5,
  VSUM_ERR_NO_PAIRS = 6,
  VSUM_ERR_IO = 7,
  VSUM_ERR_NULL_ARGUMENT = 8,
  VSUM_ERR_BUFFER_TOO_SMALL = 9,
  VSUM_ERR_INTERNAL = 10
} vsum_status;

typedef enum vsum_wiener_mode {
  VSUM_WIENER_ADAPTIVE = 0,
  VSUM_WIENER_FREQUENCY = 1
} vsum_wiener_mode;

typedef enum vsum_base_filter {
  VSUM_BASE_WIENER = 0,
  VSUM_BASE_GAUSSIAN = 1
} vsum_base_filter;

typedef enum vsum_stream_kind {
  VSUM_STREAM_AUTO = 0,
  VSUM_STREAM_DIRECTORY = 1,
  VSUM_STREAM_Y4M = 2
} vsum_stream_kind;

/* Intermediates recorded by vsum_summarize_traced. */
typedef enum vsum_trace_item {
  VSUM_TRACE_SOURCE1 = 0,
  VSUM_TRACE_SOURCE2,
  VSUM_TRACE_BASE1,
  VSUM_TRACE_BASE2,
  VSUM_TRACE_DETAIL1,
  VSUM_TRACE_DETAIL2,
  VSUM_TRACE_SALIENCY1,
  VSUM_TRACE_SALIENCY2,
  VSUM_TRACE_WEIGHT1,
  VSUM_TRACE_WEIGHT2,
  VSUM_TRACE_FUSED,
  VSUM_TRACE_ITEM_COUNT
} vsum_trace_item;

/* Bit flags for vsum_bench_run. */
#define VSUM_METHOD_SALIENCY_FUSION 1u
#define VSUM_METHOD_AVERAGE 2u
#define VSUM_METHOD_OPTICAL_FLOW 4u
#define VSUM_METHOD_ALL 7u

typedef struct vsum_config vsum_config;
typedef struct vsum_image vsum_image;
typedef struct vsum_stream vsum_stream;
typedef struct vsum_trace vsum_trace;
typedef struct vsum_bench_report vsum_bench_report;

typedef struct vsum_timing {
  const char* method; /* valid while the owning report lives */
  uint64_t frames;
  int32_t width;
  int32_t height;
  double wall_seconds;
  double per_frame_ms;
  int32_t threads;
  int32_t repeats;
} vsum_timing;

VSUM_API const char* vsum_version(void);
VSUM_API const char* vsum_status_string(vsum_status status);
VSUM_API const char* vsum_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Defaults: log_sigma 2.0, wiener_window 5, noise variance estimated,
 * added_noise_sigma 0, adaptive Wiener, seed 0, Wiener base, epsilon_tie
 * 1e-12, threads 1. Setters validate and return VSUM_ERR_PARAMETER on bad
 * values, leaving the config unchanged. */
VSUM_API vsum_status vsum_config_create(vsum_config** out);
VSUM_API void vsum_config_destroy(vsum_config* cfg);
VSUM_API vsum_status vsum_config_set_log_sigma(vsum_config* cfg, double sigma);
VSUM_API vsum_status vsum_config_set_wiener_window(vsum_config* cfg, int window);
/* A negative value restores automatic estimation. */
VSUM_API vsum_status vsum_config_set_wiener_noise_variance(vsum_config* cfg, double variance);
VSUM_API vsum_status vsum_config_set_added_noise_sigma(vsum_config* cfg, double sigma);
VSUM_API vsum_status vsum_config_set_noise_seed(vsum_config* cfg, uint64_t seed);
VSUM_API vsum_status vsum_config_set_wiener_mode(vsum_config* cfg, vsum_wiener_mode mode);
VSUM_API vsum_status vsum_config_set_base_filter(vsum_config* cfg, vsum_base_filter filter);
VSUM_API vsum_status vsum_config_set_epsilon_tie(vsum_config* cfg, double epsilon);
VSUM_API vsum_status vsum_config_set_threads(vsum_config* cfg, int threads);

/* ---- images ----------------------------------------------------------- */

VSUM_API vsum_status vsum_image_from_bytes(const uint8_t* raw, size_t length, int width,
                                           int height, int channels, vsum_image** out);
VSUM_API vsum_status vsum_image_read(const char* path, vsum_image** out);
VSUM_API void vsum_image_destroy(vsum_image* img);
VSUM_API vsum_status vsum_image_info(const vsum_image* img, int* width, int* height,
                                     int* channels);
/* Interleaved, clamped, rounded samples; depth is 8 or 16. For depth 16 each
 * sample occupies two bytes in host order. *written receives the byte count
 * needed; VSUM_ERR_BUFFER_TOO_SMALL when capacity is short. */
VSUM_API vsum_status vsum_image_to_bytes(const vsum_image* img, int depth, uint8_t* buffer,
                                         size_t capacity, size_t* written);
/* Raw double samples of one channel, row-major. */
VSUM_API vsum_status vsum_image_copy_plane(const vsum_image* img, int channel, double* buffer,
                                           size_t capacity);
/* PNG (8/16 bit) or 8-bit PGM/PPM chosen by extension. */
VSUM_API vsum_status vsum_image_write(const vsum_image* img, const char* path, int depth);

/* ---- frame streams ---------------------------------------------------- */

VSUM_API vsum_status vsum_stream_open(const char* path, vsum_stream_kind kind, vsum_stream** out);
VSUM_API void vsum_stream_destroy(vsum_stream* stream);
VSUM_API vsum_status vsum_stream_info(const vsum_stream* stream, int* width, int* height,
                                      int* channels, uint64_t* frames);
VSUM_API vsum_status vsum_stream_first_frame(const vsum_stream* stream, vsum_image** out);
VSUM_API vsum_status vsum_stream_temporal_average(const vsum_stream* stream, vsum_image** out);
VSUM_API vsum_status vsum_stream_build_sources(const vsum_stream* stream, vsum_image** first,
                                               vsum_image** average);

/* ---- fusion ----------------------------------------------------------- */

/* cfg may be NULL for the defaults (here and in vsum_bench_run). */

VSUM_API vsum_status vsum_summarize(const vsum_image* a1, const vsum_image* a2,
                                    const vsum_config* cfg, vsum_image** out);
VSUM_API vsum_status vsum_summarize_traced(const vsum_image* a1, const vsum_image* a2,
                                           const vsum_config* cfg, vsum_trace** out);
VSUM_API void vsum_trace_destroy(vsum_trace* trace);
/* Copy of a raw intermediate. Saliency and weights are single-channel. */
VSUM_API vsum_status vsum_trace_get(const vsum_trace* trace, vsum_trace_item item,
                                    vsum_image** out);
/* Display form: details offset by +0.5, saliency min-max normalized, all
 * other items as recorded. */
VSUM_API vsum_status vsum_trace_view(const vsum_trace* trace, vsum_trace_item item,
                                     vsum_image** out);
/* Fixed base file name ("source1", ..., "fused") for an item, or NULL. */
VSUM_API const char* vsum_trace_item_name(vsum_trace_item item);

/* ---- benchmark -------------------------------------------------------- */

VSUM_API vsum_status vsum_bench_run(const vsum_stream* stream, unsigned methods, int repeats,
                                    double flow_alpha, int flow_iters, int threads,
                                    const vsum_config* cfg, vsum_bench_report** out);
VSUM_API void vsum_bench_report_destroy(vsum_bench_report* report);
VSUM_API size_t vsum_bench_report_count(const vsum_bench_report* report);
VSUM_API vsum_status vsum_bench_report_get(const vsum_bench_report* report, size_t index,
                                           vsum_timing* out);
/* JSON line (no newline) for entry `index`; *needed receives the length
 * including the terminating NUL. */
VSUM_API vsum_status vsum_bench_report_json(const vsum_bench_report* report, size_t index,
                                            char* buffer, size_t capacity, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* VSUM_VSUM_H */
