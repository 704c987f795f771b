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

// votecut: command-line front end over the C library.
//
//   votecut run    --features DIR --out FILE [--images DIR] [--models a,b] [flags]
//   votecut eval   --pred FILE --gt FILE [--iou box|mask] [--report FILE]
//   votecut filter --in FILE --out FILE [--min-score S]
//   votecut render --image FILE --pred FILE --out FILE [--image-id ID]
//
// Exit codes: 0 success, 1 partial or runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "votecut/votecut.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(vc_config* c) const { vc_config_destroy(c); }
};
struct AnnotationsDeleter {
  void operator()(vc_annotations* a) const { vc_annotations_destroy(a); }
};
struct StringDeleter {
  void operator()(char* s) const { vc_string_free(s); }
};
using ConfigPtr = std::unique_ptr<vc_config, ConfigDeleter>;
using AnnotationsPtr = std::unique_ptr<vc_annotations, AnnotationsDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report(vc_status s, const std::string& context) {
  std::fprintf(stderr, "votecut: %s: %s\n", context.c_str(), vc_last_error());
  return s == VC_ERR_USAGE || s == VC_ERR_ARGUMENT ? kExitUsage : kExitFailure;
}

bool require_file(const std::string& path, const char* what) {
  if (std::filesystem::is_regular_file(path)) return true;
  std::fprintf(stderr, "votecut: %s '%s' does not exist\n", what, path.c_str());
  return false;
}

AnnotationsPtr load(const std::string& path, int& exit_code) {
  vc_annotations* raw = nullptr;
  if (const vc_status s = vc_annotations_read(path.c_str(), &raw); s != VC_OK) {
    exit_code = report(s, "reading " + path);
    return nullptr;
  }
  return AnnotationsPtr(raw);
}

// Pipeline settings shared by run and filter. Values stay strings so the
// library does the parsing and range checks.
struct SettingFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    options[key] = app.add_option(flag, values[key], help);
  }

  // File first, then flags on top.
  int apply(vc_config* cfg) const {
    if (!config_file.empty()) {
      if (!require_file(config_file, "config file")) return kExitUsage;
      if (const vc_status s = vc_config_load_file(cfg, config_file.c_str()); s != VC_OK) {
        return report(s, "config " + config_file);
      }
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      if (const vc_status s = vc_config_set(cfg, key.c_str(), values.at(key).c_str()); s != VC_OK) {
        return report(s, "option " + opt->get_name());
      }
    }
    return kExitOk;
  }
};

void log_to_stderr(vc_log_level level, const char* message, void* user) {
  const bool quiet = *static_cast<bool*>(user);
  if (quiet && level == VC_LOG_INFO) return;
  const char* tag = level == VC_LOG_ERROR ? "error" : level == VC_LOG_WARNING ? "warning" : "info";
  std::fprintf(stderr, "votecut: %s: %s\n", tag, message);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VoteCut unsupervised object discovery"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vc_version()));

  // run
  CLI::App* run = app.add_subcommand("run", "discover instances from feature files");
  std::string features_dir, out_path, images_dir, models;
  int jobs = 1;
  bool quiet = false;
  SettingFlags run_settings;
  run->add_option("--features", features_dir, "directory of <image>.<model>.vcft files")->required();
  run->add_option("--out", out_path, "output annotation JSON")->required();
  run->add_option("--images", images_dir, "directory of <image>.ppm files (enables CRF)");
  run->add_option("--models", models, "comma-separated model ids (default: all found)");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--config", run_settings.config_file, "key = value settings file");
  run_settings.add(*run, "--tau-ncut", "tau_ncut", "affinity cosine threshold");
  run_settings.add(*run, "--tau-c", "tau_c", "clustering IoU threshold");
  run_settings.add(*run, "--tau-m", "tau_m", "pixel vote threshold");
  run_settings.add(*run, "--kmax", "k_max", "largest k for 1-D k-means");
  run_settings.add(*run, "--max-instances", "max_instances", "instances kept per image");
  run_settings.add(*run, "--crf", "crf", "CRF refinement on|off");
  run_settings.add(*run, "--min-score", "min_keep_score", "drop output instances scoring below");
  run->add_flag("-q,--quiet", quiet, "only warnings and errors");

  // eval
  CLI::App* eval = app.add_subcommand("eval", "class-agnostic AP/AR of predictions");
  std::string pred_path, gt_path, iou = "box", report_path;
  eval->add_option("--pred", pred_path, "prediction annotation JSON")->required();
  eval->add_option("--gt", gt_path, "ground-truth annotation JSON")->required();
  eval->add_option("--iou", iou, "box or mask")->check(CLI::IsMember({"box", "mask"}));
  eval->add_option("--report", report_path, "also write the JSON report here");

  // filter
  CLI::App* filter = app.add_subcommand("filter", "drop low-confidence pseudo-labels");
  std::string filter_in, filter_out;
  SettingFlags filter_settings;
  filter->add_option("--in", filter_in, "annotation JSON")->required();
  filter->add_option("--out", filter_out, "filtered annotation JSON")->required();
  filter->add_option("--config", filter_settings.config_file, "key = value settings file");
  filter_settings.add(*filter, "--min-score", "min_keep_score", "minimum score kept (default 0.2)");

  // render
  CLI::App* render = app.add_subcommand("render", "overlay predictions on an image");
  std::string image_path, render_pred, render_out, image_id;
  double alpha = 0.4;
  bool no_boxes = false, no_scores = false;
  render->add_option("--image", image_path, "binary PPM image")->required();
  render->add_option("--pred", render_pred, "prediction annotation JSON")->required();
  render->add_option("--out", render_out, "output PPM")->required();
  render->add_option("--image-id", image_id, "image id in the predictions");
  render->add_option("--alpha", alpha, "mask opacity")->check(CLI::Range(0.0, 1.0));
  render->add_flag("--no-boxes", no_boxes, "skip box outlines");
  render->add_flag("--no-scores", no_scores, "skip score labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (run->parsed()) {
    vc_config* raw = nullptr;
    if (const vc_status s = vc_config_create(&raw); s != VC_OK) return report(s, "config");
    ConfigPtr cfg(raw);
    if (const int rc = run_settings.apply(cfg.get()); rc != kExitOk) return rc;
    vc_run_options opts;
    vc_run_options_init(&opts);
    opts.features_dir = features_dir.c_str();
    opts.models = models.empty() ? nullptr : models.c_str();
    opts.images_dir = images_dir.empty() ? nullptr : images_dir.c_str();
    opts.jobs = jobs;
    vc_annotations* result = nullptr;
    vc_run_summary summary{};
    if (const vc_status s = vc_run_directory(cfg.get(), &opts, log_to_stderr, &quiet, &result, &summary);
        s != VC_OK) {
      return report(s, "run");
    }
    AnnotationsPtr preds(result);
    if (run_settings.options.at("min_keep_score")->count() > 0) {
      double min_score = 0.0;
      vc_config_get_double(cfg.get(), "min_keep_score", &min_score);
      vc_annotations* kept = nullptr;
      if (const vc_status s = vc_annotations_filter(preds.get(), min_score, &kept); s != VC_OK) {
        return report(s, "filter");
      }
      preds.reset(kept);
    }
    if (const vc_status s = vc_annotations_write(preds.get(), out_path.c_str()); s != VC_OK) {
      return report(s, "writing " + out_path);
    }
    if (!quiet) {
      std::fprintf(stderr,
                   "votecut: %d image(s) processed, %d skipped, %d failed, %d instance(s) -> %s\n",
                   summary.images_processed, summary.images_skipped, summary.images_failed,
                   summary.instances, out_path.c_str());
    }
    return summary.images_failed > 0 ? kExitFailure : kExitOk;
  }

  if (eval->parsed()) {
    if (!require_file(pred_path, "predictions") || !require_file(gt_path, "ground truth")) {
      return kExitUsage;
    }
    int rc = kExitOk;
    AnnotationsPtr preds = load(pred_path, rc);
    if (!preds) return rc;
    AnnotationsPtr gts = load(gt_path, rc);
    if (!gts) return rc;
    vc_eval_report rep{};
    const vc_iou_kind kind = iou == "mask" ? VC_IOU_MASK : VC_IOU_BOX;
    if (const vc_status s = vc_evaluate(preds.get(), gts.get(), kind, &rep); s != VC_OK) {
      return report(s, "eval");
    }
    char* json_raw = nullptr;
    char* table_raw = nullptr;
    vc_eval_report_to_json(&rep, &json_raw);
    StringPtr json(json_raw);
    vc_eval_report_to_table(&rep, &table_raw);
    StringPtr table(table_raw);
    std::printf("%s\n%s", json.get(), table.get());
    if (rep.no_ground_truth) std::fprintf(stderr, "votecut: warning: ground truth has no instances\n");
    if (!report_path.empty()) {
      std::FILE* f = std::fopen(report_path.c_str(), "wb");
      if (f == nullptr) {
        std::fprintf(stderr, "votecut: cannot write %s\n", report_path.c_str());
        return kExitFailure;
      }
      std::fprintf(f, "%s\n", json.get());
      std::fclose(f);
    }
    return kExitOk;
  }

  if (filter->parsed()) {
    if (!require_file(filter_in, "annotations")) return kExitUsage;
    vc_config* raw = nullptr;
    if (const vc_status s = vc_config_create(&raw); s != VC_OK) return report(s, "config");
    ConfigPtr cfg(raw);
    if (const int rc = filter_settings.apply(cfg.get()); rc != kExitOk) return rc;
    double min_score = 0.0;
    vc_config_get_double(cfg.get(), "min_keep_score", &min_score);
    int rc = kExitOk;
    AnnotationsPtr in = load(filter_in, rc);
    if (!in) return rc;
    vc_annotations* kept_raw = nullptr;
    if (const vc_status s = vc_annotations_filter(in.get(), min_score, &kept_raw); s != VC_OK) {
      return report(s, "filter");
    }
    AnnotationsPtr kept(kept_raw);
    if (const vc_status s = vc_annotations_write(kept.get(), filter_out.c_str()); s != VC_OK) {
      return report(s, "writing " + filter_out);
    }
    size_t before = 0, after = 0;
    vc_annotations_counts(in.get(), nullptr, &before);
    vc_annotations_counts(kept.get(), nullptr, &after);
    std::fprintf(stderr, "votecut: kept %zu of %zu instance(s) with score >= %g\n", after, before,
                 min_score);
    return kExitOk;
  }

  if (render->parsed()) {
    if (!require_file(image_path, "image") || !require_file(render_pred, "predictions")) {
      return kExitUsage;
    }
    int rc = kExitOk;
    AnnotationsPtr preds = load(render_pred, rc);
    if (!preds) return rc;
    vc_render_options opts;
    vc_render_options_init(&opts);
    opts.alpha = alpha;
    opts.draw_boxes = no_boxes ? 0 : 1;
    opts.draw_scores = no_scores ? 0 : 1;
    opts.image_id = image_id.empty() ? nullptr : image_id.c_str();
    if (const vc_status s = vc_render_overlay(image_path.c_str(), preds.get(), &opts, render_out.c_str());
        s != VC_OK) {
      return report(s, "render");
    }
    return kExitOk;
  }
  return kExitUsage;
}
