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
#include <string>
#include <vector>

#include "votecut/core.hpp"
#include "votecut/spectral.hpp"

namespace votecut {

/// One connected region of one k-means segment, at patch-grid resolution.
struct MaskProposal {
  BinaryMask mask;
  std::string model_id;
  int k_used = 0;
  int segment_label = 0;
  int component_index = 0;
};

/// Exact 1-D k-means. Equal values never straddle a cluster boundary, so
/// fewer than k clusters come back when there are fewer than k distinct
/// values. Labels are numbered by ascending cluster mean.
std::vector<int> kmeans_1d(std::span<const double> values, int k);

/// Within-cluster sum of squares for a labelling.
double within_cluster_ss(std::span<const double> values, std::span<const int> labels);

/// Maximal 4-connected regions of cells whose label equals `segment`, in
/// row-major order of their first cell.
std::vector<BinaryMask> connected_components(std::span<const int> labels, int grid_h, int grid_w,
                                             int segment);

/// Merges eigenvector entries that differ by at most `relative_tol` of the
/// value range into one level (the midpoint of the merged run).
std::vector<double> merge_plateaus(std::span<const double> values, double relative_tol);

/// For each k in [2, k_max]: cluster the eigenvector, then emit one proposal
/// per (segment, 4-connected component).
std::vector<MaskProposal> generate_proposals(const Eigenvector& ev, int grid_h, int grid_w,
                                             int k_max, const std::string& model_id = {},
                                             double plateau_tol = 1e-6);

}  // namespace votecut
