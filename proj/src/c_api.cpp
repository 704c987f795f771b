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

#define VOTECUT_BUILDING
#include "votecut/votecut.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <sstream>
#include <string>

#include "votecut/batch.hpp"
#include "votecut/config.hpp"
#include "votecut/evalkit.hpp"
#include "votecut/featureio.hpp"
#include "votecut/render.hpp"
#include "votecut/softloss.hpp"
#include "votecut/spectral.hpp"

struct vc_config {
  votecut::PipelineConfig cfg;
};

struct vc_annotations {
  votecut::AnnotationSet set;
};

namespace {

thread_local std::string g_last_error;

vc_status status_of(votecut::ErrorKind kind) {
  using votecut::ErrorKind;
  switch (kind) {
    case ErrorKind::argument: return VC_ERR_ARGUMENT;
    case ErrorKind::shape: return VC_ERR_SHAPE;
    case ErrorKind::empty_mask: return VC_ERR_EMPTY_MASK;
    case ErrorKind::format: return VC_ERR_FORMAT;
    case ErrorKind::data: return VC_ERR_DATA;
    case ErrorKind::io: return VC_ERR_IO;
    case ErrorKind::solver: return VC_ERR_SOLVER;
    case ErrorKind::validation: return VC_ERR_VALIDATION;
    case ErrorKind::usage: return VC_ERR_USAGE;
  }
  return VC_ERR_INTERNAL;
}

vc_status fail(vc_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
vc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return VC_OK;
  } catch (const votecut::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VC_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(VC_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(VC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VC_ERR_INTERNAL, "unknown exception");
  }
}

void require_arg(const void* p, const char* name) {
  if (p == nullptr) {
    throw votecut::Error(votecut::ErrorKind::argument, std::string(name) + " must not be NULL");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

votecut::EvalReport from_c(const vc_eval_report& r) {
  votecut::EvalReport out;
  out.ap = r.ap;
  out.ap50 = r.ap50;
  out.ap75 = r.ap75;
  out.ar100 = r.ar100;
  for (int t = 0; t < votecut::kNumIouThresholds; ++t) out.per_threshold[t] = r.per_threshold[t];
  out.num_images = r.num_images;
  out.num_gt = r.num_gt;
  out.num_pred = r.num_pred;
  out.no_ground_truth = r.no_ground_truth != 0;
  out.iou_kind = r.iou_kind == VC_IOU_MASK ? votecut::IouKind::mask : votecut::IouKind::box;
  return out;
}

}  // namespace

extern "C" {

const char* vc_version(void) { return "0.1.0"; }

const char* vc_status_string(vc_status status) {
  switch (status) {
    case VC_OK: return "ok";
    case VC_ERR_ARGUMENT: return "invalid argument";
    case VC_ERR_SHAPE: return "shape mismatch";
    case VC_ERR_EMPTY_MASK: return "empty mask";
    case VC_ERR_FORMAT: return "format error";
    case VC_ERR_DATA: return "data error";
    case VC_ERR_IO: return "i/o error";
    case VC_ERR_SOLVER: return "solver error";
    case VC_ERR_VALIDATION: return "validation error";
    case VC_ERR_USAGE: return "usage error";
    case VC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* vc_last_error(void) { return g_last_error.c_str(); }

void vc_string_free(char* s) { std::free(s); }

vc_status vc_config_create(vc_config** out) {
  return guarded([&] {
    require_arg(out, "out");
    *out = new vc_config();
  });
}

void vc_config_destroy(vc_config* cfg) { delete cfg; }

vc_status vc_config_set(vc_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require_arg(cfg, "cfg");
    require_arg(key, "key");
    require_arg(value, "value");
    votecut::PipelineConfig next = cfg->cfg;
    votecut::apply_setting(next, key, value);
    votecut::validate(next);
    cfg->cfg = next;
  });
}

vc_status vc_config_get_double(const vc_config* cfg, const char* key, double* out) {
  return guarded([&] {
    require_arg(cfg, "cfg");
    require_arg(key, "key");
    require_arg(out, "out");
    *out = votecut::setting_value(cfg->cfg, key);
  });
}

vc_status vc_config_load_file(vc_config* cfg, const char* path) {
  return guarded([&] {
    require_arg(cfg, "cfg");
    require_arg(path, "path");
    votecut::PipelineConfig next = cfg->cfg;
    votecut::load_config_file(next, path);
    votecut::validate(next);
    cfg->cfg = next;
  });
}

vc_status vc_annotations_read(const char* path, vc_annotations** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new vc_annotations{votecut::read_annotations(path)};
  });
}

vc_status vc_annotations_parse(const char* json, vc_annotations** out) {
  return guarded([&] {
    require_arg(json, "json");
    require_arg(out, "out");
    *out = new vc_annotations{votecut::parse_annotations(json)};
  });
}

vc_status vc_annotations_write(const vc_annotations* set, const char* path) {
  return guarded([&] {
    require_arg(set, "set");
    require_arg(path, "path");
    votecut::write_annotations(set->set, path);
  });
}

vc_status vc_annotations_to_json(const vc_annotations* set, char** out) {
  return guarded([&] {
    require_arg(set, "set");
    require_arg(out, "out");
    *out = dup_string(votecut::serialize_annotations(set->set));
  });
}

void vc_annotations_destroy(vc_annotations* set) { delete set; }

vc_status vc_annotations_counts(const vc_annotations* set, size_t* num_images,
                                size_t* num_annotations) {
  return guarded([&] {
    require_arg(set, "set");
    if (num_images) *num_images = set->set.images.size();
    if (num_annotations) *num_annotations = set->set.annotations.size();
  });
}

vc_status vc_annotations_filter(const vc_annotations* set, double min_score,
                                vc_annotations** out) {
  return guarded([&] {
    require_arg(set, "set");
    require_arg(out, "out");
    if (!(min_score >= 0.0 && min_score <= 1.0)) {
      throw votecut::Error(votecut::ErrorKind::argument, "min_score must lie in [0,1]");
    }
    *out = new vc_annotations{votecut::filter_annotations(set->set, min_score)};
  });
}

void vc_run_options_init(vc_run_options* options) {
  if (options == nullptr) return;
  options->features_dir = nullptr;
  options->models = nullptr;
  options->images_dir = nullptr;
  options->jobs = 1;
}

vc_status vc_run_directory(const vc_config* cfg, const vc_run_options* options, vc_log_fn log,
                           void* user, vc_annotations** out, vc_run_summary* summary) {
  return guarded([&] {
    require_arg(cfg, "cfg");
    require_arg(options, "options");
    require_arg(out, "out");
    if (options->features_dir == nullptr) {
      throw votecut::Error(votecut::ErrorKind::usage, "features directory is required");
    }
    votecut::RunManifest manifest;
    manifest.features_dir = options->features_dir;
    manifest.config = cfg->cfg;
    manifest.jobs = options->jobs;
    if (options->images_dir != nullptr && options->images_dir[0] != '\0') {
      manifest.images_dir = options->images_dir;
    }
    if (options->models != nullptr) {
      std::stringstream ss(options->models);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) manifest.model_ids.push_back(item);
      }
    }
    votecut::LogSink sink;
    if (log != nullptr) {
      sink = [log, user](votecut::LogLevel level, const std::string& msg) {
        log(static_cast<vc_log_level>(level), msg.c_str(), user);
      };
    }
    votecut::RunSummary s = votecut::run_batch(manifest, sink);
    if (summary != nullptr) {
      summary->images_found = s.images_found;
      summary->images_processed = s.images_processed;
      summary->images_skipped = s.images_skipped;
      summary->images_failed = s.images_failed;
      summary->instances = s.instances;
    }
    *out = new vc_annotations{std::move(s.annotations)};
  });
}

vc_status vc_evaluate(const vc_annotations* pred, const vc_annotations* gt, vc_iou_kind kind,
                      vc_eval_report* out) {
  return guarded([&] {
    require_arg(pred, "pred");
    require_arg(gt, "gt");
    require_arg(out, "out");
    const votecut::EvalReport r = votecut::evaluate(
        pred->set, gt->set, kind == VC_IOU_MASK ? votecut::IouKind::mask : votecut::IouKind::box);
    out->ap = r.ap;
    out->ap50 = r.ap50;
    out->ap75 = r.ap75;
    out->ar100 = r.ar100;
    for (int t = 0; t < votecut::kNumIouThresholds; ++t) out->per_threshold[t] = r.per_threshold[t];
    out->num_images = r.num_images;
    out->num_gt = r.num_gt;
    out->num_pred = r.num_pred;
    out->no_ground_truth = r.no_ground_truth ? 1 : 0;
    out->iou_kind = kind;
  });
}

vc_status vc_eval_report_to_json(const vc_eval_report* report, char** out) {
  return guarded([&] {
    require_arg(report, "report");
    require_arg(out, "out");
    *out = dup_string(votecut::report_to_json(from_c(*report)));
  });
}

vc_status vc_eval_report_to_table(const vc_eval_report* report, char** out) {
  return guarded([&] {
    require_arg(report, "report");
    require_arg(out, "out");
    *out = dup_string(votecut::report_to_table(from_c(*report)));
  });
}

void vc_render_options_init(vc_render_options* options) {
  if (options == nullptr) return;
  options->alpha = 0.4;
  options->draw_boxes = 1;
  options->draw_scores = 1;
  options->image_id = nullptr;
}

vc_status vc_render_overlay(const char* image_path, const vc_annotations* pred,
                            const vc_render_options* options, const char* out_path) {
  return guarded([&] {
    require_arg(image_path, "image_path");
    require_arg(pred, "pred");
    require_arg(out_path, "out_path");
    vc_render_options opts;
    vc_render_options_init(&opts);
    if (options != nullptr) opts = *options;

    const std::filesystem::path in(image_path);
    if (!std::filesystem::exists(in)) {
      throw votecut::Error(votecut::ErrorKind::usage, "image '" + in.string() + "' does not exist");
    }
    const votecut::AnnotationSet& set = pred->set;
    std::string image_id;
    if (opts.image_id != nullptr) {
      image_id = opts.image_id;
      if (set.find_image(image_id) == nullptr) {
        throw votecut::Error(votecut::ErrorKind::usage,
                             "image id '" + image_id + "' not in predictions");
      }
    } else {
      for (const auto& img : set.images) {
        if (img.file_name == in.filename().string()) image_id = img.id;
      }
      if (image_id.empty() && set.find_image(in.stem().string()) != nullptr) {
        image_id = in.stem().string();
      }
      if (image_id.empty() && set.images.size() == 1) image_id = set.images.front().id;
      if (image_id.empty()) {
        throw votecut::Error(votecut::ErrorKind::usage,
                             "cannot tell which predicted image '" + in.filename().string() +
                                 "' is; pass an image id");
      }
    }
    const votecut::RgbImage image = votecut::read_ppm(in);
    std::vector<votecut::ScoredInstance> instances;
    for (const auto& a : set.annotations) {
      if (a.image_id == image_id) instances.push_back(votecut::to_instance(a));
    }
    votecut::RenderOptions ro;
    ro.alpha = opts.alpha;
    ro.draw_boxes = opts.draw_boxes != 0;
    ro.draw_scores = opts.draw_scores != 0;
    votecut::write_ppm(votecut::render_overlay(image, instances, ro), out_path);
  });
}

vc_status vc_feature_file_info(const char* path, int* grid_h, int* grid_w, int* dim) {
  return guarded([&] {
    require_arg(path, "path");
    const votecut::FeatureMap fm = votecut::read_feature_file(path);
    if (grid_h) *grid_h = fm.grid_h;
    if (grid_w) *grid_w = fm.grid_w;
    if (dim) *dim = fm.dim;
  });
}

}  // extern "C"
