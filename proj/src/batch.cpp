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

#include "votecut/batch.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "votecut/votecut.hpp"

namespace votecut {

namespace fs = std::filesystem;

std::map<std::string, std::map<std::string, fs::path>> scan_feature_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::usage, "features directory '" + dir.string() + "' does not exist");
  }
  std::map<std::string, std::map<std::string, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".vcft") continue;
    const std::string stem = entry.path().stem().string();
    const auto dot = stem.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == stem.size()) continue;
    found[stem.substr(0, dot)][stem.substr(dot + 1)] = entry.path();
  }
  return found;
}

namespace {

struct ImageOutcome {
  bool ok = false;
  ImageRecord record;
  std::vector<ScoredInstance> instances;
};

}  // namespace

RunSummary run_batch(const RunManifest& manifest, const LogSink& log) {
  validate(manifest.config);
  if (manifest.jobs < 1) throw Error(ErrorKind::usage, "jobs must be at least 1");
  std::mutex log_mutex;
  auto emit = [&](LogLevel level, const std::string& msg) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    log(level, msg);
  };

  const auto found = scan_feature_dir(manifest.features_dir);
  if (found.empty()) {
    throw Error(ErrorKind::usage,
                "no .vcft feature files in '" + manifest.features_dir.string() + "'");
  }
  std::vector<std::string> models = manifest.model_ids;
  if (models.empty()) {
    for (const auto& [image, per_model] : found) {
      for (const auto& [model, path] : per_model) models.push_back(model);
    }
  }
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());

  RunSummary summary;
  summary.images_found = static_cast<int>(found.size());
  std::vector<std::pair<std::string, std::vector<fs::path>>> work;
  for (const auto& [image, per_model] : found) {
    std::vector<fs::path> paths;
    std::vector<std::string> missing;
    for (const auto& m : models) {
      const auto it = per_model.find(m);
      if (it == per_model.end()) {
        missing.push_back(m);
      } else {
        paths.push_back(it->second);
      }
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ",") + m;
      emit(LogLevel::warning, "skipping image '" + image + "': missing features for " + list);
      ++summary.images_skipped;
      continue;
    }
    work.emplace_back(image, std::move(paths));
  }
  if (work.empty()) {
    throw Error(ErrorKind::usage, "no image has features for every requested model");
  }
  if (!manifest.images_dir && manifest.config.crf_enabled) {
    emit(LogLevel::warning, "no images directory given; CRF refinement is skipped");
  }

  std::vector<ImageOutcome> outcomes(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      const auto& [image_id, paths] = work[i];
      ImageOutcome& out = outcomes[i];
      try {
        std::vector<FeatureMap> maps;
        for (const auto& p : paths) maps.push_back(read_feature_file(p));
        std::optional<RgbImage> rgb;
        out.record.id = image_id;
        if (manifest.images_dir) {
          out.record.file_name = image_id + ".ppm";
          rgb = read_ppm(*manifest.images_dir / out.record.file_name);
        }
        VoteCutResult result = run_votecut(image_id, maps, rgb ? &*rgb : nullptr, manifest.config);
        out.record.height = rgb ? rgb->height : manifest.config.vote_side;
        out.record.width = rgb ? rgb->width : manifest.config.vote_side;
        out.instances = std::move(result.instances);
        out.ok = true;
      } catch (const std::exception& e) {
        emit(LogLevel::error, "image '" + image_id + "' failed: " + e.what());
      }
    }
  };
  const int threads = std::min<int>(manifest.jobs, static_cast<int>(work.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (auto& out : outcomes) {
    if (!out.ok) {
      ++summary.images_failed;
      continue;
    }
    ++summary.images_processed;
    std::stable_sort(out.instances.begin(), out.instances.end(),
                     [](const ScoredInstance& a, const ScoredInstance& b) { return a.score > b.score; });
    summary.annotations.images.push_back(out.record);
    for (const auto& inst : out.instances) {
      summary.annotations.annotations.push_back(to_annotation(inst));
    }
    summary.instances += static_cast<int>(out.instances.size());
  }
  return summary;
}

}  // namespace votecut
