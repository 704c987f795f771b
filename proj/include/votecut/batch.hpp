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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "votecut/config.hpp"
#include "votecut/featureio.hpp"

namespace votecut {

struct RunManifest {
  std::filesystem::path features_dir;
  std::vector<std::string> model_ids;  // empty: every model found in features_dir
  std::optional<std::filesystem::path> images_dir;  // "<image_id>.ppm"; enables the CRF
  PipelineConfig config;
  int jobs = 1;
};

enum class LogLevel { info, warning, error };
using LogSink = std::function<void(LogLevel, const std::string&)>;

struct RunSummary {
  AnnotationSet annotations;  // images by id, instances by descending score
  int images_found = 0;
  int images_processed = 0;
  int images_skipped = 0;  // missing at least one requested model
  int images_failed = 0;
  int instances = 0;
};

/// image id -> model id -> feature file, for every "<image>.<model>.vcft"
/// in `dir`. The model id is the last dot-separated part of the stem.
std::map<std::string, std::map<std::string, std::filesystem::path>> scan_feature_dir(
    const std::filesystem::path& dir);

/// Runs the pipeline over every image in the manifest. Per-image failures are
/// logged and counted; no usable input at all is a usage error. The result
/// does not depend on `jobs`.
RunSummary run_batch(const RunManifest& manifest, const LogSink& log = {});

}  // namespace votecut
