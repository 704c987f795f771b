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

#include "symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace votecut::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double tridiagonal_norm(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(t.diag[i]);
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    norm = std::max(norm, r);
  }
  return norm;
}

}  // namespace

HouseholderTridiagonal::HouseholderTridiagonal(std::vector<double> a, int n)
    : n_(n), a_(std::move(a)), beta_(static_cast<std::size_t>(std::max(n - 2, 0)), 0.0) {
  const std::size_t N = static_cast<std::size_t>(n);
  auto A = [&](int i, int j) -> double& { return a_[static_cast<std::size_t>(i) * N + j]; };
  t_.diag.assign(N, 0.0);
  t_.off.assign(N > 0 ? N - 1 : 0, 0.0);
  std::vector<double> p(N), w(N), v(N);
  for (int k = 0; k + 2 < n; ++k) {
    t_.diag[k] = A(k, k);
    double tail2 = 0.0;
    for (int i = k + 2; i < n; ++i) tail2 += A(i, k) * A(i, k);
    const double xnorm = std::sqrt(tail2 + A(k + 1, k) * A(k + 1, k));
    if (xnorm == 0.0 || tail2 == 0.0) {
      // Column already reduced; identity reflector.
      t_.off[k] = A(k + 1, k);
      beta_[k] = 0.0;
      continue;
    }
    const double x0 = A(k + 1, k);
    const double alpha = x0 >= 0.0 ? -xnorm : xnorm;
    // v overwrites the column below the subdiagonal: v = x - alpha e1.
    A(k + 1, k) = x0 - alpha;
    const double vnorm2 = A(k + 1, k) * A(k + 1, k) + tail2;
    const double beta = 2.0 / vnorm2;
    beta_[k] = beta;
    t_.off[k] = alpha;

    for (int i = k + 1; i < n; ++i) v[i] = A(i, k);
    double pv = 0.0;
    for (int i = k + 1; i < n; ++i) {
      double s = 0.0;
      const double* row = &A(i, 0);
      for (int j = k + 1; j < n; ++j) s += row[j] * v[j];
      p[i] = beta * s;
      pv += p[i] * v[i];
    }
    const double K = 0.5 * beta * pv;
    for (int i = k + 1; i < n; ++i) w[i] = p[i] - K * v[i];
    for (int i = k + 1; i < n; ++i) {
      const double vi = v[i];
      const double wi = w[i];
      double* row = &A(i, 0);
      for (int j = k + 1; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
    }
  }
  if (n >= 2) {
    t_.diag[n - 2] = A(n - 2, n - 2);
    t_.diag[n - 1] = A(n - 1, n - 1);
    t_.off[n - 2] = A(n - 1, n - 2);
  } else if (n == 1) {
    t_.diag[0] = A(0, 0);
  }
}

void HouseholderTridiagonal::back_transform(std::span<double> z) const {
  const std::size_t N = static_cast<std::size_t>(n_);
  for (int k = n_ - 3; k >= 0; --k) {
    if (beta_[k] == 0.0) continue;
    double dot = 0.0;
    for (int i = k + 1; i < n_; ++i) dot += a_[i * N + k] * z[i];
    const double f = beta_[k] * dot;
    for (int i = k + 1; i < n_; ++i) z[i] -= f * a_[i * N + k];
  }
}

int sturm_count(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  const double tiny = kEps * std::max(tridiagonal_norm(t), std::numeric_limits<double>::min());
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i > 0 ? t.off[i - 1] * t.off[i - 1] : 0.0;
    q = (t.diag[i] - x) - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_eigenvalue(const Tridiagonal& t, int k) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double floor = kEps * std::max(tridiagonal_norm(t), std::numeric_limits<double>::min());
  lo -= floor;
  hi += floor;
  for (int it = 0; it < 256; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= kEps * (std::abs(lo) + std::abs(hi)) + floor) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double lambda) {
  const std::size_t n = t.diag.size();
  if (n == 1) return {1.0};
  // LU with partial pivoting of T - lambda I (LAPACK gttrf layout).
  std::vector<double> d(n), dl(t.off), du(t.off), du2(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] != 0.0) {
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        dl[i] = 0.0;
      }
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  const double tiny = kEps * std::max(tridiagonal_norm(t), std::numeric_limits<double>::min());
  for (double& v : d) {
    if (std::abs(v) < tiny) v = v < 0.0 ? -tiny : tiny;
  }

  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  for (int iter = 0; iter < 4; ++iter) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i] - dl[i] * b[i + 1];
        b[i] = b[i + 1];
        b[i + 1] = temp;
      }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n - 2; ii-- > 0;) {
      b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
    double norm = 0.0;
    for (double v : b) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : b) v /= norm;
  }
  return b;
}

void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& values,
                  std::vector<double>& vectors) {
  const std::size_t N = static_cast<std::size_t>(n);
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * N + j]; };
  std::vector<double> v(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) v[i * N + i] = 1.0;
  double total = 0.0;
  for (double x : a) total += x * x;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off <= kEps * kEps * total * 1e-4 || off == 0.0) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = v[k * N + p], vkq = v[k * N + q];
          v[k * N + p] = c * vkp - s * vkq;
          v[k * N + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return A(x, x) < A(y, y); });
  values.resize(N);
  vectors.assign(N * N, 0.0);
  for (std::size_t c = 0; c < N; ++c) {
    values[c] = A(order[c], order[c]);
    for (std::size_t r = 0; r < N; ++r) vectors[r * N + c] = v[r * N + order[c]];
  }
}

}  // namespace votecut::linalg
