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

#include "votecut/affinity.hpp"

#include <algorithm>
#include <cmath>

namespace votecut {

AffinityGraph::AffinityGraph(int n, std::vector<std::uint8_t> links)
    : n_(n), links_(std::move(links)), degrees_(static_cast<std::size_t>(n), 0.0) {
  if (n < 1 || links_.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorKind::shape, "affinity link matrix must be n*n");
  }
  for (int i = 0; i < n_; ++i) {
    std::size_t strong = 0;
    for (std::uint8_t l : row(i)) strong += l != 0;
    // Summed as count * 1 + rest * 1e-5 so the degree is independent of the
    // order in which links appear.
    degrees_[i] = static_cast<double>(strong) +
                  static_cast<double>(static_cast<std::size_t>(n_) - strong) * kWeakEdgeWeight;
  }
}

bool AffinityGraph::complete() const {
  return std::all_of(links_.begin(), links_.end(), [](std::uint8_t l) { return l != 0; });
}

void AffinityGraph::multiply(std::span<const double> x, std::span<double> y) const {
  double total = 0.0;
  for (double v : x) total += v;
  for (int i = 0; i < n_; ++i) {
    const auto r = row(i);
    double strong = 0.0;
    for (int j = 0; j < n_; ++j) strong += static_cast<double>(r[j]) * x[j];
    // W = weak * 1 1^T + (1 - weak) * L, with L the 0/1 link matrix.
    y[i] = kWeakEdgeWeight * total + (1.0 - kWeakEdgeWeight) * strong;
  }
}

AffinityGraph build_affinity(const FeatureMap& fm, double tau_ncut) {
  validate(fm);
  const int n = fm.patches();
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (float v : fm.patch(i)) s += static_cast<double>(v) * v;
    norms[i] = std::sqrt(s);
    if (!(norms[i] > 0.0)) {
      throw Error(ErrorKind::data, "patch " + std::to_string(i) + " of model '" + fm.model_id +
                                       "' has a zero-norm feature vector");
    }
  }
  std::vector<std::uint8_t> links(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    const auto fi = fm.patch(i);
    links[static_cast<std::size_t>(i) * n + i] = 1;
    for (int j = i + 1; j < n; ++j) {
      const auto fj = fm.patch(j);
      double dot = 0.0;
      for (int d = 0; d < fm.dim; ++d) dot += static_cast<double>(fi[d]) * fj[d];
      const double cosine = dot / (norms[i] * norms[j]);
      const std::uint8_t l = cosine >= tau_ncut ? 1 : 0;
      links[static_cast<std::size_t>(i) * n + j] = l;
      links[static_cast<std::size_t>(j) * n + i] = l;
    }
  }
  return AffinityGraph(n, std::move(links));
}

}  // namespace votecut
