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

#include "votecut/votecut.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "votecut/affinity.hpp"
#include "votecut/crf.hpp"
#include "votecut/spectral.hpp"

namespace votecut {

namespace {

std::size_t first_set_bit(const BinaryMask& m) {
  const auto words = m.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (words[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words[w]));
  }
  return m.size();
}

}  // namespace

std::vector<BinaryMask> normalize_resolution(std::span<const MaskProposal> proposals, int height,
                                             int width) {
  std::vector<BinaryMask> out;
  out.reserve(proposals.size());
  for (const auto& p : proposals) out.push_back(resize_nearest(p.mask, height, width));
  return out;
}

std::vector<int> canonical_order(std::span<const BinaryMask> masks) {
  struct Key {
    std::size_t area;
    std::size_t first;
  };
  std::vector<Key> keys;
  keys.reserve(masks.size());
  for (const auto& m : masks) keys.push_back({m.count(), first_set_bit(m)});
  std::vector<int> order(masks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (keys[a].area != keys[b].area) return keys[a].area > keys[b].area;
    if (keys[a].first != keys[b].first) return keys[a].first < keys[b].first;
    const auto wa = masks[a].words();
    const auto wb = masks[b].words();
    return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
  });
  return order;
}

std::vector<ProposalCluster> greedy_iou_clustering(std::span<const BinaryMask> masks, double tau_c) {
  const int n = static_cast<int>(masks.size());
  std::vector<char> linked(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const char l = mask_iou(masks[i], masks[j]) > tau_c ? 1 : 0;
      linked[static_cast<std::size_t>(i) * n + j] = l;
      linked[static_cast<std::size_t>(j) * n + i] = l;
    }
  }
  std::vector<char> assigned(n, 0);
  std::vector<ProposalCluster> clusters;
  int remaining = n;
  while (remaining > 0) {
    int pivot = -1;
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (assigned[i]) continue;
      int degree = 0;
      for (int j = 0; j < n; ++j) {
        degree += !assigned[j] && linked[static_cast<std::size_t>(i) * n + j];
      }
      if (degree > best) {
        best = degree;
        pivot = i;
      }
    }
    ProposalCluster cluster;
    cluster.pivot_index = pivot;
    cluster.member_indices.push_back(pivot);
    for (int j = 0; j < n; ++j) {
      if (!assigned[j] && linked[static_cast<std::size_t>(pivot) * n + j]) {
        cluster.member_indices.push_back(j);
      }
    }
    for (int idx : cluster.member_indices) {
      assigned[idx] = 1;
      cluster.members.push_back(masks[idx]);
    }
    remaining -= cluster.size();
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

VoteField vote_field(const ProposalCluster& cluster) {
  if (cluster.members.empty()) throw Error(ErrorKind::argument, "cannot vote on an empty cluster");
  const auto& first = cluster.members.front();
  VoteField field{first.height(), first.width(), std::vector<double>(first.size(), 0.0)};
  std::vector<int> counts(first.size(), 0);
  for (const auto& m : cluster.members) {
    if (!m.same_shape(first)) throw Error(ErrorKind::shape, "cluster members differ in shape");
    const auto words = m.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        counts[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))] += 1;
        bits &= bits - 1;
      }
    }
  }
  const double p = static_cast<double>(cluster.members.size());
  for (std::size_t i = 0; i < counts.size(); ++i) field.mean[i] = counts[i] / p;
  return field;
}

std::optional<BinaryMask> vote_mask(const ProposalCluster& cluster, double tau_m) {
  const VoteField field = vote_field(cluster);
  BinaryMask out(field.height, field.width);
  for (std::size_t i = 0; i < field.mean.size(); ++i) {
    if (field.mean[i] > tau_m) out.assign(i, true);
  }
  if (out.none()) return std::nullopt;
  return out;
}

std::vector<double> score_clusters(std::span<const ProposalCluster> clusters) {
  int largest = 0;
  for (const auto& c : clusters) largest = std::max(largest, c.size());
  std::vector<double> scores;
  scores.reserve(clusters.size());
  for (const auto& c : clusters) {
    scores.push_back(static_cast<double>(c.size()) / static_cast<double>(largest));
  }
  return scores;
}

std::vector<MaskProposal> model_proposals(const FeatureMap& fm, const PipelineConfig& cfg) {
  const AffinityGraph graph = build_affinity(fm, cfg.tau_ncut);
  if (graph.complete()) {
    std::vector<MaskProposal> out;
    for (int k = 2; k <= cfg.k_max; ++k) {
      out.push_back({BinaryMask::full(fm.grid_h, fm.grid_w), fm.model_id, k, 0, 0});
    }
    return out;
  }
  SpectralOptions opts;
  opts.tol = cfg.spectral_tol;
  const Eigenvector ev = second_smallest_eigenpair(graph, opts);
  return generate_proposals(ev, fm.grid_h, fm.grid_w, cfg.k_max, fm.model_id, cfg.plateau_tol);
}

VoteCutResult consensus_instances(const std::string& image_id,
                                  std::span<const std::vector<MaskProposal>> per_model,
                                  const RgbImage* image, int out_height, int out_width,
                                  const PipelineConfig& cfg) {
  validate(cfg);
  if (image != nullptr && (image->height != out_height || image->width != out_width)) {
    throw Error(ErrorKind::shape, "image dimensions disagree with the requested output size");
  }
  std::vector<BinaryMask> lattice;
  for (const auto& proposals : per_model) {
    auto resized = normalize_resolution(proposals, cfg.vote_side, cfg.vote_side);
    std::move(resized.begin(), resized.end(), std::back_inserter(lattice));
  }
  VoteCutResult result;
  result.num_proposals = static_cast<int>(lattice.size());
  if (lattice.empty()) return result;

  const std::vector<int> order = canonical_order(lattice);
  std::vector<BinaryMask> sorted;
  sorted.reserve(lattice.size());
  for (int idx : order) sorted.push_back(std::move(lattice[idx]));

  std::vector<ProposalCluster> clusters = greedy_iou_clustering(sorted, cfg.tau_c);
  const std::vector<double> scores = score_clusters(clusters);
  result.num_clusters = static_cast<int>(clusters.size());

  std::vector<int> rank(clusters.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (clusters[a].size() != clusters[b].size()) return clusters[a].size() > clusters[b].size();
    return clusters[a].pivot_index < clusters[b].pivot_index;
  });
  if (static_cast<int>(rank.size()) > cfg.max_instances) {
    result.dropped_by_cap = static_cast<int>(rank.size()) - cfg.max_instances;
    rank.resize(static_cast<std::size_t>(cfg.max_instances));
  }

  const bool refine = image != nullptr && cfg.crf_enabled;
  for (int c : rank) {
    std::optional<BinaryMask> voted = vote_mask(clusters[c], cfg.tau_m);
    if (!voted) {
      ++result.dropped_empty;
      continue;
    }
    BinaryMask mask = resize_nearest(*voted, out_height, out_width);
    if (refine) mask = crf_refine(mask, *image, cfg.crf_params);
    if (mask.none()) {
      ++result.dropped_empty;
      continue;
    }
    ScoredInstance inst;
    inst.box = tight_bbox(mask);
    inst.mask = std::move(mask);
    inst.score = scores[c];
    inst.image_id = image_id;
    result.instances.push_back(std::move(inst));
  }
  return result;
}

VoteCutResult run_votecut(const std::string& image_id, std::span<const FeatureMap> feature_maps,
                          const RgbImage* image, const PipelineConfig& cfg) {
  validate(cfg);
  if (feature_maps.empty()) {
    throw Error(ErrorKind::argument, "image '" + image_id + "': no feature maps");
  }
  std::vector<std::vector<MaskProposal>> per_model;
  for (const auto& fm : feature_maps) {
    try {
      per_model.push_back(model_proposals(fm, cfg));
    } catch (const Error& e) {
      throw Error(e.kind(), "image '" + image_id + "', model '" + fm.model_id + "': " + e.what());
    }
  }
  const int h = image ? image->height : cfg.vote_side;
  const int w = image ? image->width : cfg.vote_side;
  try {
    return consensus_instances(image_id, per_model, image, h, w, cfg);
  } catch (const Error& e) {
    throw Error(e.kind(), "image '" + image_id + "': " + e.what());
  }
}

}  // namespace votecut
