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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "votecut/core.hpp"
#include "votecut/featureio.hpp"

namespace votecut {

// Class-agnostic COCO-style detection metrics: greedy score-ordered matching
// and 101-point interpolated precision, averaged over IoU 0.50:0.05:0.95.

enum class IouKind { box, mask };

const char* to_string(IouKind kind);
IouKind parse_iou_kind(const std::string& text);

inline constexpr int kNumIouThresholds = 10;
inline constexpr int kNumRecallThresholds = 101;
inline constexpr int kDefaultMaxDetections = 100;

/// 0.50, 0.55, ..., 0.95, each the double nearest the decimal value.
std::array<double, kNumIouThresholds> iou_thresholds();

struct EvalInstance {
  BoundingBox box;
  BinaryMask mask;  // only read for mask IoU
  double score = 1.0;
};

/// Outcome of matching one image's predictions at one IoU threshold.
struct ImageMatches {
  std::vector<double> scores;    // predictions in descending score order
  std::vector<int> matched_gt;   // per prediction; -1 for a false positive
  int num_gt = 0;

  int true_positives() const;
};

/// Row-major predictions x ground truth IoU.
std::vector<double> iou_matrix(std::span<const EvalInstance> preds,
                               std::span<const EvalInstance> gts, IouKind kind);

/// Each prediction, in descending score order (stable), takes the unmatched
/// ground truth with the highest IoU >= thresh (lowest index on ties).
ImageMatches match_instances(std::span<const EvalInstance> preds, std::span<const EvalInstance> gts,
                             double thresh, IouKind kind);

/// Same matching over a precomputed IoU matrix; `scores` need not be sorted.
ImageMatches match_from_ious(std::span<const double> scores, std::span<const double> ious,
                             int num_gt, double thresh);

/// 101-point interpolated AP over a dataset at one threshold; 0 without ground truth.
double average_precision(std::span<const ImageMatches> images);

/// Dataset recall at one threshold; 0 without ground truth.
double recall(std::span<const ImageMatches> images);

/// Mean recall over the thresholds in `per_threshold`.
double average_recall(std::span<const std::vector<ImageMatches>> per_threshold);

struct EvalReport {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  double ar100 = 0.0;
  std::array<double, kNumIouThresholds> per_threshold{};
  int num_images = 0;
  int num_gt = 0;
  int num_pred = 0;
  bool no_ground_truth = false;
  IouKind iou_kind = IouKind::box;
};

/// Predictions may only reference images present in the ground truth set.
EvalReport evaluate(const AnnotationSet& preds, const AnnotationSet& gts, IouKind kind,
                    int max_dets = kDefaultMaxDetections);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

}  // namespace votecut
