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

#include <cstdint>
#include <span>
#include <vector>

#include "votecut/featureio.hpp"

namespace votecut {

inline constexpr double kWeakEdgeWeight = 1e-5;

/// Thresholded patch affinity graph. Each edge weight is either 1 (cosine
/// similarity >= threshold) or kWeakEdgeWeight, so the matrix is held as
/// one byte per entry.
class AffinityGraph {
 public:
  AffinityGraph() = default;
  AffinityGraph(int n, std::vector<std::uint8_t> links);

  int size() const { return n_; }
  bool linked(int i, int j) const { return links_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  double weight(int i, int j) const { return linked(i, j) ? 1.0 : kWeakEdgeWeight; }
  double degree(int i) const { return degrees_[i]; }
  std::span<const double> degrees() const { return degrees_; }
  std::span<const std::uint8_t> row(int i) const {
    return {links_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }
  /// True when every pair is linked, i.e. the graph offers no cut.
  bool complete() const;

  /// y = W x
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  int n_ = 0;
  std::vector<std::uint8_t> links_;
  std::vector<double> degrees_;
};

/// W_ij = 1 when cos(f_i, f_j) >= tau_ncut, otherwise 1e-5.
AffinityGraph build_affinity(const FeatureMap& fm, double tau_ncut);

}  // namespace votecut
