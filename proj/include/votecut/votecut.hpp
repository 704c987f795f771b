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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "votecut/config.hpp"
#include "votecut/core.hpp"
#include "votecut/featureio.hpp"
#include "votecut/proposals.hpp"

namespace votecut {

struct ProposalCluster {
  int pivot_index = 0;
  std::vector<int> member_indices;  // includes the pivot
  std::vector<BinaryMask> members;

  int size() const { return static_cast<int>(member_indices.size()); }
};

/// Per-pixel mean of a cluster's member masks.
struct VoteField {
  int height = 0;
  int width = 0;
  std::vector<double> mean;
};

/// Nearest-neighbour upsampling of patch-grid proposals onto one lattice.
std::vector<BinaryMask> normalize_resolution(std::span<const MaskProposal> proposals, int height,
                                             int width);

/// Order used before clustering: descending area, then earliest set bit in
/// row-major order, then raster contents. Returns the permutation.
std::vector<int> canonical_order(std::span<const BinaryMask> masks);

/// Repeatedly takes as pivot the unassigned mask with the most unassigned
/// neighbours at IoU > tau_c (lowest index on ties) and groups it with those
/// neighbours.
std::vector<ProposalCluster> greedy_iou_clustering(std::span<const BinaryMask> masks, double tau_c);

VoteField vote_field(const ProposalCluster& cluster);

/// Pixel is kept when the member mean strictly exceeds tau_m. Returns
/// nullopt when nothing survives.
std::optional<BinaryMask> vote_mask(const ProposalCluster& cluster, double tau_m);

/// Cluster size over the largest cluster size.
std::vector<double> score_clusters(std::span<const ProposalCluster> clusters);

/// Affinity, Fiedler vector and proposals for one model. A fully linked
/// affinity graph has no cut and yields the full grid for every k.
std::vector<MaskProposal> model_proposals(const FeatureMap& fm, const PipelineConfig& cfg);

struct VoteCutResult {
  std::vector<ScoredInstance> instances;  // descending score
  int num_proposals = 0;
  int num_clusters = 0;
  int dropped_by_cap = 0;
  int dropped_empty = 0;
};

/// Clustering, voting, scoring, capping and refinement over proposals that
/// were already produced per model. Final masks are out_height x out_width;
/// `image`, when given, must have those dimensions and enables the CRF.
VoteCutResult consensus_instances(const std::string& image_id,
                                  std::span<const std::vector<MaskProposal>> per_model,
                                  const RgbImage* image, int out_height, int out_width,
                                  const PipelineConfig& cfg);

/// Full per-image pipeline. Without an image the output lattice is
/// vote_side x vote_side and no CRF runs.
VoteCutResult run_votecut(const std::string& image_id, std::span<const FeatureMap> feature_maps,
                          const RgbImage* image, const PipelineConfig& cfg);

}  // namespace votecut
