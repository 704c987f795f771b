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

#include <vector>

#include "votecut/affinity.hpp"

namespace votecut {

/// Generalized eigenpair of (D - W) x = lambda D x, normalized so x^T D x = 1.
struct Eigenvector {
  std::vector<double> values;
  double eigenvalue = 0.0;
  double residual = 0.0;  // ||(D - W) x - lambda D x||_2 / ||x||_D
};

struct SpectralOptions {
  double tol = 1e-8;
  // Graphs up to this many nodes use a dense tridiagonal solve; larger ones
  // use a thick-restart Krylov iteration.
  int dense_limit = 1024;
  int krylov_dim = 48;
  int krylov_keep = 12;
  int max_matvecs = 20000;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(ErrorKind::solver, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Fiedler pair: the second-smallest generalized eigenvalue and its vector.
/// The sign is fixed so that the largest-magnitude entry (lowest index on
/// ties) is positive.
Eigenvector second_smallest_eigenpair(const AffinityGraph& g, const SpectralOptions& opts = {});

/// Smallest pair (lambda = 0, x constant). Exposed for consistency checks.
Eigenvector smallest_eigenpair(const AffinityGraph& g, const SpectralOptions& opts = {});

/// ||(D - W) x - lambda D x||_2 / ||x||_D for an arbitrary candidate pair.
double generalized_residual(const AffinityGraph& g, std::span<const double> x, double lambda);

}  // namespace votecut
