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

#include "votecut/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symmetric_eigen.hpp"

namespace votecut {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Normalized Laplacian L = I - D^{-1/2} W D^{-1/2} and the helpers both
// solver paths share. The trivial eigenvector of L is D^{1/2} 1.
struct NormalizedLaplacian {
  const AffinityGraph& g;
  std::vector<double> sqrt_d;
  std::vector<double> inv_sqrt_d;
  std::vector<double> trivial;  // unit-norm D^{1/2} 1

  explicit NormalizedLaplacian(const AffinityGraph& graph) : g(graph) {
    const int n = g.size();
    sqrt_d.resize(n);
    inv_sqrt_d.resize(n);
    for (int i = 0; i < n; ++i) {
      if (!(g.degree(i) > 0.0)) {
        throw Error(ErrorKind::data, "graph node " + std::to_string(i) + " has zero degree");
      }
      sqrt_d[i] = std::sqrt(g.degree(i));
      inv_sqrt_d[i] = 1.0 / sqrt_d[i];
    }
    trivial = sqrt_d;
    const double nrm = norm2(trivial);
    for (double& v : trivial) v /= nrm;
  }

  int size() const { return g.size(); }

  std::vector<double> dense(bool deflate) const {
    const int n = size();
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    // Shift the trivial pair above the spectrum (which lies in [0, 2]).
    const double shift = deflate ? 3.0 : 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = -g.weight(i, j) * inv_sqrt_d[i] * inv_sqrt_d[j];
        if (i == j) v += 1.0;
        v += shift * trivial[i] * trivial[j];
        a[static_cast<std::size_t>(i) * n + j] = v;
      }
    }
    return a;
  }

  // out = (2I - L) y = y + D^{-1/2} W D^{-1/2} y
  void apply_complement(std::span<const double> y, std::span<double> out,
                        std::vector<double>& scratch) const {
    const int n = size();
    scratch.resize(n);
    for (int i = 0; i < n; ++i) scratch[i] = inv_sqrt_d[i] * y[i];
    std::vector<double> wy(n);
    g.multiply(scratch, wy);
    for (int i = 0; i < n; ++i) out[i] = y[i] + inv_sqrt_d[i] * wy[i];
  }
};

std::vector<double> dense_solve(const NormalizedLaplacian& lap, bool deflate) {
  const int n = lap.size();
  linalg::HouseholderTridiagonal ht(lap.dense(deflate), n);
  const double lambda = linalg::tridiagonal_eigenvalue(ht.tridiagonal(), 0);
  std::vector<double> z = linalg::tridiagonal_eigenvector(ht.tridiagonal(), lambda);
  ht.back_transform(z);
  return z;
}

// Largest eigenpair of 2I - L (the smallest of L), optionally restricted to
// the complement of the trivial vector. Thick-restart Rayleigh-Ritz on a
// Krylov basis with full reorthogonalization.
std::vector<double> krylov_solve(const NormalizedLaplacian& lap, bool deflate,
                                 const SpectralOptions& opts, double target_residual) {
  const int n = lap.size();
  const int effective = n - (deflate ? 1 : 0);
  const int dim = std::max(2, std::min(opts.krylov_dim, effective));
  const int keep = std::clamp(opts.krylov_keep, 1, dim - 1);

  std::vector<std::vector<double>> basis, images;
  std::vector<double> scratch;
  int matvecs = 0;

  auto orthogonalize = [&](std::vector<double>& c) {
    for (int pass = 0; pass < 2; ++pass) {
      if (deflate) axpy(-dot(lap.trivial, c), lap.trivial, c);
      for (const auto& b : basis) axpy(-dot(b, c), b, c);
    }
    return norm2(c);
  };
  auto push = [&](std::vector<double> c) {
    std::vector<double> mc(n);
    lap.apply_complement(c, mc, scratch);
    ++matvecs;
    basis.push_back(std::move(c));
    images.push_back(std::move(mc));
  };

  std::vector<double> start(n);
  for (int i = 0; i < n; ++i) start[i] = lap.sqrt_d[i] * (1.0 + 0.5 * std::sin(0.37 * i + 0.11));
  {
    const double nrm = orthogonalize(start);
    for (double& v : start) v /= nrm;
    push(std::move(start));
  }

  double best_residual = std::numeric_limits<double>::infinity();
  while (true) {
    bool exhausted = false;
    while (static_cast<int>(basis.size()) < dim) {
      std::vector<double> c = images.back();
      const double before = norm2(c);
      const double nrm = orthogonalize(c);
      if (nrm <= 1e-12 * std::max(before, 1.0)) {
        exhausted = true;  // invariant subspace reached
        break;
      }
      for (double& v : c) v /= nrm;
      push(std::move(c));
    }

    const int k = static_cast<int>(basis.size());
    std::vector<double> h(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        const double v = 0.5 * (dot(basis[i], images[j]) + dot(basis[j], images[i]));
        h[static_cast<std::size_t>(i) * k + j] = v;
        h[static_cast<std::size_t>(j) * k + i] = v;
      }
    }
    std::vector<double> theta, s;
    linalg::jacobi_eigen(std::move(h), k, theta, s);

    auto ritz = [&](int col, std::vector<double>& y, std::vector<double>& my) {
      y.assign(n, 0.0);
      my.assign(n, 0.0);
      for (int i = 0; i < k; ++i) {
        const double c = s[static_cast<std::size_t>(i) * k + col];
        axpy(c, basis[i], y);
        axpy(c, images[i], my);
      }
    };
    std::vector<double> y, my;
    ritz(k - 1, y, my);
    std::vector<double> r = my;
    axpy(-theta[k - 1], y, r);
    const double rnorm = norm2(r);
    best_residual = std::min(best_residual, rnorm);

    if (rnorm <= target_residual || exhausted || k >= effective) return y;
    if (matvecs >= opts.max_matvecs) {
      throw SolverError("Krylov eigensolver did not converge within " +
                            std::to_string(opts.max_matvecs) + " matrix products",
                        best_residual);
    }

    std::vector<std::vector<double>> kept, kept_images;
    for (int c = k - 1; c >= k - keep; --c) {
      std::vector<double> yc, myc;
      ritz(c, yc, myc);
      kept.push_back(std::move(yc));
      kept_images.push_back(std::move(myc));
    }
    basis = std::move(kept);
    images = std::move(kept_images);
    const double nrm = orthogonalize(r);
    if (nrm <= 1e-14) return y;
    for (double& v : r) v /= nrm;
    push(std::move(r));
  }
}

void fix_sign(std::vector<double>& x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[best])) best = i;
  }
  if (x[best] < 0.0) {
    for (double& v : x) v = -v;
  }
}

Eigenvector solve(const AffinityGraph& g, const SpectralOptions& opts, bool deflate) {
  const int n = g.size();
  if (n < (deflate ? 2 : 1)) {
    throw Error(ErrorKind::argument, "graph too small for the requested eigenpair");
  }
  NormalizedLaplacian lap(g);
  double dmax = 0.0;
  for (double d : g.degrees()) dmax = std::max(dmax, d);

  std::vector<double> y;
  if (n <= opts.dense_limit) {
    y = dense_solve(lap, deflate);
  } else {
    y = krylov_solve(lap, deflate, opts, 0.25 * opts.tol / std::sqrt(dmax));
  }
  if (deflate) axpy(-dot(lap.trivial, y), lap.trivial, y);
  const double ynorm = norm2(y);
  for (double& v : y) v /= ynorm;

  // Rayleigh quotient of L at y equals the generalized one at D^{-1/2} y.
  std::vector<double> my(n), scratch;
  lap.apply_complement(y, my, scratch);
  const double lambda = 2.0 - dot(y, my);

  Eigenvector ev;
  ev.values.resize(n);
  for (int i = 0; i < n; ++i) ev.values[i] = lap.inv_sqrt_d[i] * y[i];
  fix_sign(ev.values);
  ev.eigenvalue = std::max(lambda, 0.0);
  ev.residual = generalized_residual(g, ev.values, ev.eigenvalue);
  if (!(ev.residual <= opts.tol)) {
    throw SolverError("eigenpair residual " + std::to_string(ev.residual) +
                          " exceeds tolerance " + std::to_string(opts.tol),
                      ev.residual);
  }
  return ev;
}

}  // namespace

double generalized_residual(const AffinityGraph& g, std::span<const double> x, double lambda) {
  const int n = g.size();
  std::vector<double> wx(n);
  g.multiply(x, wx);
  double r2 = 0.0, xd2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = g.degree(i);
    const double r = d * x[i] - wx[i] - lambda * d * x[i];
    r2 += r * r;
    xd2 += d * x[i] * x[i];
  }
  return std::sqrt(r2) / std::sqrt(xd2);
}

Eigenvector second_smallest_eigenpair(const AffinityGraph& g, const SpectralOptions& opts) {
  return solve(g, opts, true);
}

Eigenvector smallest_eigenpair(const AffinityGraph& g, const SpectralOptions& opts) {
  return solve(g, opts, false);
}

}  // namespace votecut
