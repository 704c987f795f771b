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

#include <span>
#include <vector>

#include "votecut/core.hpp"
#include "votecut/featureio.hpp"

namespace votecut {

/// Pseudo-label instance with its consensus score.
struct InstanceTarget {
  double score = 1.0;
  BinaryMask mask;
  BoundingBox box;
};

struct ClassLogits {
  double z_f = 0.0;  // foreground
  double z_b = 0.0;  // background
};

struct SoftClsLoss {
  double loss = 0.0;
  double d_zf = 0.0;
  double d_zb = 0.0;
};

/// Sum of per-instance base losses weighted by their scores. Serves both the
/// box and the mask term.
double weighted_instance_loss(std::span<const double> base_losses, std::span<const double> scores);

/// Soft binary cross-entropy against target y over a two-class softmax,
/// with its gradient in the logits.
SoftClsLoss soft_cls_loss(const ClassLogits& logits, double y);

/// gate[r] = 1 when prediction r overlaps some target with IoU > tau_iou.
/// With no targets every gate is 0.
std::vector<int> droploss_gate(std::span<const BinaryMask> predictions,
                               std::span<const BinaryMask> targets, double tau_iou);

struct InstanceLosses {
  double cls = 0.0;
  double box = 0.0;
  double mask = 0.0;
};

double total_loss(std::span<const InstanceLosses> per_instance, std::span<const int> gates);

/// Keeps instances scoring at least min_score, order preserved.
std::vector<ScoredInstance> filter_pseudo_labels(std::span<const ScoredInstance> instances,
                                                 double min_score);

/// Same rule on an annotation file; the image list is kept whole.
AnnotationSet filter_annotations(const AnnotationSet& set, double min_score);

}  // namespace votecut
