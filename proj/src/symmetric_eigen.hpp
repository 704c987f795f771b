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

// Small dense symmetric eigen-solvers backing the spectral module.

#include <span>
#include <vector>

namespace votecut::linalg {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1; size n-1
};

/// Householder reduction of a symmetric row-major n*n matrix, in place.
/// The reflectors are kept in `a` so eigenvectors of the tridiagonal form
/// can be mapped back with back_transform().
class HouseholderTridiagonal {
 public:
  HouseholderTridiagonal(std::vector<double> a, int n);

  const Tridiagonal& tridiagonal() const { return t_; }
  /// z <- Q z, where A = Q T Q^T.
  void back_transform(std::span<double> z) const;

 private:
  int n_;
  std::vector<double> a_;
  std::vector<double> beta_;
  Tridiagonal t_;
};

/// Number of eigenvalues of T strictly below x (Sturm sequence count).
int sturm_count(const Tridiagonal& t, double x);

/// k-th smallest (0-based) eigenvalue of T by bisection.
double tridiagonal_eigenvalue(const Tridiagonal& t, int k);

/// Unit eigenvector of T for a converged eigenvalue, by inverse iteration.
std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double lambda);

/// Cyclic Jacobi on a small symmetric row-major matrix. Eigenvalues are
/// returned ascending; column i of `vectors` (row-major n*n) pairs with value i.
void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& values,
                  std::vector<double>& vectors);

}  // namespace votecut::linalg
