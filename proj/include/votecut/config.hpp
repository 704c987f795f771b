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
#include <string>

namespace votecut {

struct CrfParams {
  int iterations = 10;
  double w_app = 4.0;        // appearance kernel weight
  double theta_alpha = 20.0;  // appearance spatial bandwidth, low-res pixels
  double theta_beta = 13.0;   // appearance colour bandwidth, 0-255 units
  double w_sm = 3.0;         // smoothness kernel weight
  double theta_gamma = 3.0;   // smoothness spatial bandwidth, low-res pixels
  double unary_fg = 0.9;     // confidence assigned to the input mask label
  int max_side = 80;         // inference runs at or below this side length
};

struct PipelineConfig {
  double tau_ncut = 0.15;  // cosine threshold for a unit edge weight
  double tau_c = 0.6;      // IoU a proposal must exceed to join a pivot
  double tau_m = 0.2;      // per-pixel vote fraction a pixel must exceed
  int k_max = 3;
  int max_instances = 10;
  double tau_iou = 0.01;         // DropLoss gate
  double min_keep_score = 0.2;   // self-training filter
  CrfParams crf_params;

  bool crf_enabled = true;
  int vote_side = 480;           // common lattice for clustering and voting
  double spectral_tol = 1e-8;
  // Eigenvector entries closer than this fraction of the value range are
  // treated as one level before k-means.
  double plateau_tol = 1e-6;
};

void validate(const CrfParams& params);
void validate(const PipelineConfig& cfg);

/// Applies one `key = value` setting. Keys use the snake_case field names
/// (crf_* for CrfParams fields, e.g. crf_iterations). Throws on unknown keys.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Current value of a setting as a number (booleans as 0/1).
double setting_value(const PipelineConfig& cfg, const std::string& key);

/// Reads `key = value` lines; blank lines and `#` comments are ignored.
void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

}  // namespace votecut
