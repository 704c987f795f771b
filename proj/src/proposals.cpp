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

#include "votecut/proposals.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace votecut {

std::vector<int> kmeans_1d(std::span<const double> values, int k) {
  const int n = static_cast<int>(values.size());
  if (k < 1 || k > n) {
    throw Error(ErrorKind::argument, "k-means needs 1 <= k <= n, got k=" + std::to_string(k) +
                                         " for n=" + std::to_string(n));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });

  // Distinct levels with multiplicities, centred to limit cancellation in
  // the prefix-sum cost.
  std::vector<double> level;
  std::vector<double> weight;
  std::vector<int> level_of(n);
  for (int idx : order) {
    if (level.empty() || values[idx] != level.back()) {
      level.push_back(values[idx]);
      weight.push_back(0.0);
    }
    weight.back() += 1.0;
    level_of[idx] = static_cast<int>(level.size()) - 1;
  }
  const int m = static_cast<int>(level.size());
  const int kk = std::min(k, m);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;

  std::vector<double> c0(m + 1, 0.0), c1(m + 1, 0.0), c2(m + 1, 0.0);
  for (int i = 0; i < m; ++i) {
    const double x = level[i] - mean;
    c0[i + 1] = c0[i] + weight[i];
    c1[i + 1] = c1[i] + weight[i] * x;
    c2[i + 1] = c2[i] + weight[i] * x * x;
  }
  // Cost of grouping levels [a, b).
  auto cost = [&](int a, int b) {
    const double w = c0[b] - c0[a];
    const double s = c1[b] - c1[a];
    return std::max(0.0, (c2[b] - c2[a]) - s * s / w);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // best[j][i]: optimal cost of the first i levels split into j+1 groups.
  std::vector<std::vector<double>> best(kk, std::vector<double>(m + 1, kInf));
  std::vector<std::vector<int>> split(kk, std::vector<int>(m + 1, 0));
  for (int i = 1; i <= m; ++i) best[0][i] = cost(0, i);
  for (int j = 1; j < kk; ++j) {
    for (int i = j + 1; i <= m; ++i) {
      for (int s = j; s < i; ++s) {
        const double c = best[j - 1][s] + cost(s, i);
        if (c < best[j][i]) {
          best[j][i] = c;
          split[j][i] = s;
        }
      }
    }
  }
  std::vector<int> group_of_level(m);
  int end = m;
  for (int j = kk - 1; j >= 0; --j) {
    const int begin = j > 0 ? split[j][end] : 0;
    for (int i = begin; i < end; ++i) group_of_level[i] = j;
    end = begin;
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = group_of_level[level_of[i]];
  return labels;
}

double within_cluster_ss(std::span<const double> values, std::span<const int> labels) {
  const int groups = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> sum(groups, 0.0), cnt(groups, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[labels[i]] += values[i];
    cnt[labels[i]] += 1.0;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - sum[labels[i]] / cnt[labels[i]];
    ss += d * d;
  }
  return ss;
}

std::vector<BinaryMask> connected_components(std::span<const int> labels, int grid_h, int grid_w,
                                             int segment) {
  if (labels.size() != static_cast<std::size_t>(grid_h) * grid_w) {
    throw Error(ErrorKind::shape, "label grid size does not match its dimensions");
  }
  std::vector<BinaryMask> out;
  std::vector<char> seen(labels.size(), 0);
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(labels.size()); ++start) {
    if (seen[start] || labels[start] != segment) continue;
    BinaryMask comp(grid_h, grid_w);
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      const int r = cell / grid_w;
      const int c = cell % grid_w;
      comp.set(r, c);
      const int nbrs[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& nb : nbrs) {
        if (nb[0] < 0 || nb[0] >= grid_h || nb[1] < 0 || nb[1] >= grid_w) continue;
        const int id = nb[0] * grid_w + nb[1];
        if (!seen[id] && labels[id] == segment) {
          seen[id] = 1;
          stack.push_back(id);
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<double> merge_plateaus(std::span<const double> values, double relative_tol) {
  std::vector<double> out(values.begin(), values.end());
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  const double tol = relative_tol * range;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i < order.size() && values[order[i]] - values[order[i - 1]] <= tol) continue;
    // Midpoint is exactly odd under negation, unlike a running mean.
    const double level = 0.5 * (values[order[begin]] + values[order[i - 1]]);
    for (std::size_t j = begin; j < i; ++j) out[order[j]] = level;
    begin = i;
  }
  return out;
}

std::vector<MaskProposal> generate_proposals(const Eigenvector& ev, int grid_h, int grid_w,
                                             int k_max, const std::string& model_id,
                                             double plateau_tol) {
  const std::size_t n = static_cast<std::size_t>(grid_h) * grid_w;
  if (grid_h < 1 || grid_w < 1 || ev.values.size() != n) {
    throw Error(ErrorKind::shape, "eigenvector length " + std::to_string(ev.values.size()) +
                                      " does not match grid " + std::to_string(grid_h) + "x" +
                                      std::to_string(grid_w));
  }
  if (k_max < 2) throw Error(ErrorKind::argument, "k_max must be >= 2");
  const std::vector<double> levels = merge_plateaus(ev.values, plateau_tol);
  std::vector<MaskProposal> out;
  for (int k = 2; k <= k_max; ++k) {
    const int kk = std::min<int>(k, static_cast<int>(n));
    const std::vector<int> labels = kmeans_1d(levels, kk);
    const int segments = *std::max_element(labels.begin(), labels.end()) + 1;
    for (int s = 0; s < segments; ++s) {
      auto comps = connected_components(labels, grid_h, grid_w, s);
      for (std::size_t c = 0; c < comps.size(); ++c) {
        out.push_back({std::move(comps[c]), model_id, k, s, static_cast<int>(c)});
      }
    }
  }
  return out;
}

}  // namespace votecut
