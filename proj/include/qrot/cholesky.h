// Copyright 2026 The qrot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QROT_CHOLESKY_H_
#define QROT_CHOLESKY_H_

#include <span>
#include <vector>

#include "qrot/common.h"
#include "qrot/graph.h"

namespace qrot {

// Dense upper-triangular factor R with R^T R = A for a symmetric positive
// definite A. Rows are stored packed: row k holds R(k, k..n-1).
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  // Identity factor of size n.
  explicit CholeskyFactor(int n);

  // Factors the dense symmetric matrix `a` (row-major n x n, only the upper
  // triangle is read). Throws FactorizationError on a nonpositive pivot.
  static CholeskyFactor FromDense(std::span<const double> a, int n);

  int size() const { return n_; }
  double at(int i, int j) const { return j < i ? 0.0 : r_[offset(i) + j - i]; }
  // Number of rank-1 modifications since the factor was built.
  int update_count() const { return update_count_; }

  // R'^T R' = R^T R + x x^T (Givens rotations).
  void rank1_update(std::span<const double> x);

  // R'^T R' = R^T R - x x^T (hyperbolic rotations). Returns false when a
  // pivot would become nonpositive; the factor is then left in an
  // unspecified state and must be rebuilt by the caller.
  [[nodiscard]] bool rank1_downdate(std::span<const double> x);

  // (R^T R)^{-1} b by forward then back substitution.
  NodeVector solve(std::span<const double> b) const;

  // R^T R as a dense row-major matrix.
  std::vector<double> gram() const;

 private:
  std::size_t offset(int k) const {
    const std::size_t kk = static_cast<std::size_t>(k);
    return kk * static_cast<std::size_t>(n_) - kk * (kk - 1) / 2;
  }
  double* row(int k) { return r_.data() + offset(k); }
  const double* row(int k) const { return r_.data() + offset(k); }

  int n_ = 0;
  std::vector<double> r_;
  int update_count_ = 0;
};

// Dense L + N N^T for the active Laplacian and its component basis.
std::vector<double> augmented_laplacian(const Graph& graph,
                                        const ActiveMask& mask,
                                        const ComponentLabeling& labeling);

// Factor of L + N N^T. The augmented matrix is positive definite whenever
// the labeling matches the mask, so a failure means they disagree.
CholeskyFactor factorize(const Graph& graph, const ActiveMask& mask,
                         const ComponentLabeling& labeling);

// L^+ b = (L + N N^T)^{-1} P b. The result is projected once more onto the
// complement of the null basis.
NodeVector pinv_apply(const CholeskyFactor& factor,
                      const ComponentLabeling& labeling,
                      std::span<const double> b);

}  // namespace qrot

#endif  // QROT_CHOLESKY_H_
