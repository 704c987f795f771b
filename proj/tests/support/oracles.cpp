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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace vctest {

namespace {

// Compare sum(a_i / b_i) with sum(c_j / d_j) exactly by bringing both to a
// common denominator. Denominators are group sizes (<= 12), so products stay
// far inside 128 bits.
std::pair<__int128, __int128> total(const ExactCost& c) {
  __int128 num = 0, den = 1;
  for (const auto& [n, d] : c.terms) {
    num = num * d + n * den;
    den *= d;
    const __int128 g = std::gcd(static_cast<long long>(num < 0 ? -num : num),
                                static_cast<long long>(den));
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  return {num, den};
}

}  // namespace

bool ExactCost::operator<(const ExactCost& o) const {
  const auto [a, b] = total(*this);
  const auto [c, d] = total(o);
  return a * d < c * b;
}

bool ExactCost::operator==(const ExactCost& o) const {
  const auto [a, b] = total(*this);
  const auto [c, d] = total(o);
  return a * d == c * b;
}

ExactCost exact_wcss(const std::vector<long long>& values, const std::vector<int>& labels) {
  std::map<int, std::vector<long long>> groups;
  for (std::size_t i = 0; i < values.size(); ++i) groups[labels[i]].push_back(values[i]);
  ExactCost cost;
  for (const auto& [label, g] : groups) {
    __int128 s = 0, s2 = 0;
    for (long long v : g) {
      s += v;
      s2 += static_cast<__int128>(v) * v;
    }
    const __int128 n = static_cast<__int128>(g.size());
    cost.terms.emplace_back(n * s2 - s * s, n);
  }
  return cost;
}

ExactCost brute_force_min_wcss(const std::vector<long long>& values, int k) {
  std::vector<long long> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  const int groups = std::min(k, n);
  ExactCost best;
  bool have = false;
  // Choose groups-1 cut positions among the n-1 gaps.
  std::vector<int> gaps(n - 1);
  std::iota(gaps.begin(), gaps.end(), 1);
  std::vector<bool> pick(n - 1, false);
  std::fill(pick.begin(), pick.begin() + (groups - 1), true);
  do {
    std::vector<int> labels(n, 0);
    int label = 0;
    for (int i = 1; i < n; ++i) {
      if (pick[i - 1]) ++label;
      labels[i] = label;
    }
    const ExactCost c = exact_wcss(sorted, labels);
    if (!have || c < best) {
      best = c;
      have = true;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

double bits_iou(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

std::vector<TraceCluster> greedy_trace(const std::vector<Bits>& masks, double tau_c) {
  const int n = static_cast<int>(masks.size());
  std::vector<bool> left(n, true);
  std::vector<TraceCluster> out;
  for (;;) {
    int pivot = -1, best = -1;
    for (int i = 0; i < n; ++i) {
      if (!left[i]) continue;
      int degree = 0;
      for (int j = 0; j < n; ++j) {
        if (j != i && left[j] && bits_iou(masks[i], masks[j]) > tau_c) ++degree;
      }
      if (degree > best) {
        best = degree;
        pivot = i;
      }
    }
    if (pivot < 0) break;
    TraceCluster c{pivot, {pivot}};
    for (int j = 0; j < n; ++j) {
      if (j != pivot && left[j] && bits_iou(masks[pivot], masks[j]) > tau_c) c.members.push_back(j);
    }
    for (int m : c.members) left[m] = false;
    out.push_back(c);
  }
  return out;
}

Bits vote_oracle(const std::vector<Bits>& members, int tau_m_millis) {
  Bits out(members.front().size(), 0);
  const long long p = static_cast<long long>(members.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    long long count = 0;
    for (const auto& m : members) count += m[i] ? 1 : 0;
    out[i] = count * 1000 > tau_m_millis * p ? 1 : 0;
  }
  return out;
}

DensePair dense_generalized_oracle(const std::vector<double>& w, int n) {
  Eigen::MatrixXd W(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) W(i, j) = w[static_cast<std::size_t>(i) * n + j];
  }
  Eigen::VectorXd deg = W.rowwise().sum();
  Eigen::MatrixXd D = deg.asDiagonal();
  Eigen::MatrixXd L = D - W;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, D);
  if (solver.info() != Eigen::Success) throw std::runtime_error("oracle eigensolver failed");
  DensePair out;
  out.lambda2 = solver.eigenvalues()(1);
  out.lambda3 = n >= 3 ? solver.eigenvalues()(2) : std::numeric_limits<double>::infinity();
  Eigen::VectorXd x = solver.eigenvectors().col(1);
  x /= std::sqrt(x.dot(D * x));
  out.x2.assign(x.data(), x.data() + n);
  return out;
}

std::vector<float> clustered_features(std::mt19937_64& rng, int n, int dim, int centers,
                                      double noise) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> c(centers, std::vector<double>(dim));
  for (auto& v : c) {
    for (auto& x : v) x = g(rng);
  }
  std::uniform_int_distribution<int> pick(0, centers - 1);
  std::vector<float> out(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    const auto& ctr = c[pick(rng)];
    for (int k = 0; k < dim; ++k) {
      out[static_cast<std::size_t>(i) * dim + k] = static_cast<float>(ctr[k] + noise * g(rng));
    }
  }
  return out;
}

}  // namespace vctest
