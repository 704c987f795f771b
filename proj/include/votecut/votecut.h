// Copyright 2026 The VoteCut Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the VoteCut library. All handles are opaque; every call that
 * can fail returns a vc_status and leaves a message for vc_last_error() on the
 * calling thread. */
#ifndef VOTECUT_VOTECUT_H_
#define VOTECUT_VOTECUT_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(VOTECUT_BUILDING)
#define VC_API __declspec(dllexport)
#else
#define VC_API __declspec(dllimport)
#endif
#else
#define VC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vc_status {
  VC_OK = 0,
  VC_ERR_ARGUMENT = 1,
  VC_ERR_SHAPE = 2,
  VC_ERR_EMPTY_MASK = 3,
  VC_ERR_FORMAT = 4,
  VC_ERR_DATA = 5,
  VC_ERR_IO = 6,
  VC_ERR_SOLVER = 7,
  VC_ERR_VALIDATION = 8,
  VC_ERR_USAGE = 9,
  VC_ERR_INTERNAL = 10
} vc_status;

typedef enum vc_log_level { VC_LOG_INFO = 0, VC_LOG_WARNING = 1, VC_LOG_ERROR = 2 } vc_log_level;

typedef enum vc_iou_kind { VC_IOU_BOX = 0, VC_IOU_MASK = 1 } vc_iou_kind;

typedef struct vc_config vc_config;
typedef struct vc_annotations vc_annotations;

VC_API const char* vc_version(void);
VC_API const char* vc_status_string(vc_status status);
/* Message of the most recent failure on this thread; "" if none. */
VC_API const char* vc_last_error(void);
VC_API void vc_string_free(char* s);

/* Pipeline configuration, initialised to the defaults. */
VC_API vc_status vc_config_create(vc_config** out);
VC_API void vc_config_destroy(vc_config* cfg);
/* key is a snake_case field name, e.g. "tau_m", "k_max", "crf", "crf_iterations". */
VC_API vc_status vc_config_set(vc_config* cfg, const char* key, const char* value);
VC_API vc_status vc_config_get_double(const vc_config* cfg, const char* key, double* out);
/* "key = value" lines, '#' comments. */
VC_API vc_status vc_config_load_file(vc_config* cfg, const char* path);

VC_API vc_status vc_annotations_read(const char* path, vc_annotations** out);
VC_API vc_status vc_annotations_parse(const char* json, vc_annotations** out);
VC_API vc_status vc_annotations_write(const vc_annotations* set, const char* path);
VC_API vc_status vc_annotations_to_json(const vc_annotations* set, char** out);
VC_API void vc_annotations_destroy(vc_annotations* set);
VC_API vc_status vc_annotations_counts(const vc_annotations* set, size_t* num_images,
                                       size_t* num_annotations);
/* Keeps annotations with score >= min_score. */
VC_API vc_status vc_annotations_filter(const vc_annotations* set, double min_score,
                                       vc_annotations** out);

typedef void (*vc_log_fn)(vc_log_level level, const char* message, void* user);

typedef struct vc_run_options {
  const char* features_dir;
  const char* models;     /* comma-separated; NULL or "" for all found */
  const char* images_dir; /* NULL: no images, no CRF */
  int jobs;
} vc_run_options;

typedef struct vc_run_summary {
  int images_found;
  int images_processed;
  int images_skipped;
  int images_failed;
  int instances;
} vc_run_summary;

VC_API void vc_run_options_init(vc_run_options* options);
/* On VC_OK *out holds the merged predictions even if some images failed;
 * check summary->images_failed. */
VC_API vc_status vc_run_directory(const vc_config* cfg, const vc_run_options* options,
                                  vc_log_fn log, void* user, vc_annotations** out,
                                  vc_run_summary* summary);

typedef struct vc_eval_report {
  double ap;
  double ap50;
  double ap75;
  double ar100;
  double per_threshold[10]; /* IoU 0.50, 0.55, ..., 0.95 */
  int num_images;
  int num_gt;
  int num_pred;
  int no_ground_truth;
  vc_iou_kind iou_kind;
} vc_eval_report;

VC_API vc_status vc_evaluate(const vc_annotations* pred, const vc_annotations* gt,
                             vc_iou_kind kind, vc_eval_report* out);
VC_API vc_status vc_eval_report_to_json(const vc_eval_report* report, char** out);
VC_API vc_status vc_eval_report_to_table(const vc_eval_report* report, char** out);

typedef struct vc_render_options {
  double alpha;
  int draw_boxes;
  int draw_scores;
  const char* image_id; /* NULL: match the image file name, or the only image */
} vc_render_options;

VC_API void vc_render_options_init(vc_render_options* options);
/* Reads a binary PPM, overlays the image's predictions, writes a PPM. */
VC_API vc_status vc_render_overlay(const char* image_path, const vc_annotations* pred,
                                   const vc_render_options* options, const char* out_path);

/* Header of a VCFT feature file, after full validation of its payload. */
VC_API vc_status vc_feature_file_info(const char* path, int* grid_h, int* grid_w, int* dim);

#ifdef __cplusplus
}
#endif

#endif /* VOTECUT_VOTECUT_H_ */
