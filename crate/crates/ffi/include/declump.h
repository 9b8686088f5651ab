#ifndef DECLUMP_H
#define DECLUMP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DeclumpStatus {
  DECLUMP_STATUS_OK = 0,
  DECLUMP_STATUS_NULL_POINTER = 1,
  DECLUMP_STATUS_INVALID_ARGUMENT = 2,
  DECLUMP_STATUS_INVALID_CONFIG = 3,
  DECLUMP_STATUS_INVALID_BOUNDARY = 4,
  DECLUMP_STATUS_INVALID_SEEDS = 5,
  DECLUMP_STATUS_SHAPE_MISMATCH = 6,
  DECLUMP_STATUS_OUT_OF_RANGE = 7,
  DECLUMP_STATUS_FAILED = 8,
  DECLUMP_STATUS_PANIC = 9,
} DeclumpStatus;

typedef enum DeclumpCutKind {
  DECLUMP_CUT_KIND_VERTEX_VERTEX = 0,
  DECLUMP_CUT_KIND_VERTEX_CENTER = 1,
  DECLUMP_CUT_KIND_CENTER_CENTER = 2,
} DeclumpCutKind;

typedef struct DeclumpConfig DeclumpConfig;

typedef struct DeclumpResult DeclumpResult;

typedef struct DeclumpCut {
  enum DeclumpCutKind kind;
  double x0;
  double y0;
  double x1;
  double y1;
} DeclumpCut;

// Placement of the label raster: pixel `(col, row)` of the buffer sits at
// `(origin_x + col, origin_y + row)`.
typedef struct DeclumpFrame {
  int64_t origin_x;
  int64_t origin_y;
  size_t width;
  size_t height;
} DeclumpFrame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *declump_last_error(void);

// New config holding the defaults.
struct DeclumpConfig *declump_config_new(void);

// # Safety
// `config` must come from `declump_config_new` or be null.
void declump_config_free(struct DeclumpConfig *config);

// Sets one numeric field by its config-file name (`R_max`, `Theta_min`,
// `blur_sigma`, ...). The config is left unchanged on failure.
//
// # Safety
// `config` must be a live handle and `key` a NUL-terminated string.
enum DeclumpStatus declump_config_set(struct DeclumpConfig *config, const char *key, double value);

// Partitions the clump outlined by `n_vertices` polygon points.
//
// `image_values` is optional (null skips the image vote categories); when given
// it holds `width * height` row-major intensities and sets the label frame.
//
// # Safety
// Pointers must reference buffers of the stated sizes; `config` may be null
// for defaults. On success `*out` receives a handle for
// `declump_result_free`.
enum DeclumpStatus declump_partition_polygon(const struct DeclumpConfig *config,
                                             const double *vertices,
                                             size_t n_vertices,
                                             const double *seeds,
                                             size_t n_seeds,
                                             const double *image_values,
                                             size_t width,
                                             size_t height,
                                             struct DeclumpResult **out);

// Partitions the pixels of a `width * height` row-major label raster that
// carry `label`. `image_values`, when not null, has the same shape.
//
// # Safety
// As for `declump_partition_polygon`.
enum DeclumpStatus declump_partition_mask(const struct DeclumpConfig *config,
                                          const uint32_t *labels,
                                          size_t width,
                                          size_t height,
                                          uint32_t label,
                                          const double *seeds,
                                          size_t n_seeds,
                                          const double *image_values,
                                          struct DeclumpResult **out);

// # Safety
// `result` must come from a partition call or be null.
void declump_result_free(struct DeclumpResult *result);

// # Safety
// `result` must be a live handle or null (0 is returned).
size_t declump_result_cut_count(const struct DeclumpResult *result);

// # Safety
// `result` must be a live handle and `out` writable.
enum DeclumpStatus declump_result_cut(const struct DeclumpResult *result,
                                      size_t index,
                                      struct DeclumpCut *out);

// # Safety
// `result` must be a live handle or null (0 is returned).
size_t declump_result_region_count(const struct DeclumpResult *result);

// # Safety
// `result` must be a live handle and `out` writable.
enum DeclumpStatus declump_result_frame(const struct DeclumpResult *result,
                                        struct DeclumpFrame *out);

// Copies the label raster (0 outside the clump, regions numbered from 1)
// into `out`, which must hold `width * height` values of the result frame.
//
// # Safety
// `result` must be a live handle and `out` must hold `len` values.
enum DeclumpStatus declump_result_labels(const struct DeclumpResult *result,
                                         uint32_t *out,
                                         size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECLUMP_H */
