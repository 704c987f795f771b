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

#include "votecut/softloss.hpp"

#include <algorithm>
#include <cmath>

namespace votecut {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::argument, std::string(what) + ": length mismatch (" +
                                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double weighted_instance_loss(std::span<const double> base_losses, std::span<const double> scores) {
  require_same_length(base_losses.size(), scores.size(), "weighted_instance_loss");
  double total = 0.0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!(scores[j] >= 0.0 && scores[j] <= 1.0)) {
      throw Error(ErrorKind::argument, "instance score outside [0,1]");
    }
    total += scores[j] * base_losses[j];
  }
  return total;
}

SoftClsLoss soft_cls_loss(const ClassLogits& logits, double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw Error(ErrorKind::argument, "soft target outside [0,1]");
  const double m = std::max(logits.z_f, logits.z_b);
  const double lse = m + std::log(std::exp(logits.z_f - m) + std::exp(logits.z_b - m));
  const double log_f = logits.z_f - lse;
  const double log_b = logits.z_b - lse;
  const double sigma_f = 1.0 / (1.0 + std::exp(logits.z_b - logits.z_f));
  SoftClsLoss out;
  out.loss = -(y * log_f + (1.0 - y) * log_b);
  out.d_zf = sigma_f - y;
  out.d_zb = -(sigma_f - y);
  return out;
}

std::vector<int> droploss_gate(std::span<const BinaryMask> predictions,
                               std::span<const BinaryMask> targets, double tau_iou) {
  std::vector<int> gates(predictions.size(), 0);
  for (std::size_t r = 0; r < predictions.size(); ++r) {
    double best = 0.0;
    for (const auto& t : targets) best = std::max(best, mask_iou(predictions[r], t));
    gates[r] = !targets.empty() && best > tau_iou ? 1 : 0;
  }
  return gates;
}

double total_loss(std::span<const InstanceLosses> per_instance, std::span<const int> gates) {
  require_same_length(per_instance.size(), gates.size(), "total_loss");
  double total = 0.0;
  for (std::size_t j = 0; j < gates.size(); ++j) {
    if (gates[j] != 0) total += per_instance[j].cls + per_instance[j].box + per_instance[j].mask;
  }
  return total;
}

std::vector<ScoredInstance> filter_pseudo_labels(std::span<const ScoredInstance> instances,
                                                 double min_score) {
  std::vector<ScoredInstance> kept;
  std::copy_if(instances.begin(), instances.end(), std::back_inserter(kept),
               [min_score](const ScoredInstance& s) { return s.score >= min_score; });
  return kept;
}

AnnotationSet filter_annotations(const AnnotationSet& set, double min_score) {
  AnnotationSet out;
  out.images = set.images;
  std::copy_if(set.annotations.begin(), set.annotations.end(), std::back_inserter(out.annotations),
               [min_score](const Annotation& a) { return a.score >= min_score; });
  return out;
}

}  // namespace votecut
