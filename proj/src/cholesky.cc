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

#include "qrot/cholesky.h"

#include <cmath>
#include <string>

#include "qrot/simd/kernels.h"

namespace qrot {
namespace {

// Relative floor on the squared pivot after a downdate.
constexpr double kDowndatePivotFloor = 1e-14;

std::size_t FirstNonzero(std::span<const double> x) {
  std::size_t k = 0;
  while (k < x.size() && x[k] == 0.0) ++k;
  return k;
}

}  // namespace

CholeskyFactor::CholeskyFactor(int n)
    : n_(n), r_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {
  for (int k = 0; k < n; ++k) row(k)[0] = 1.0;
}

CholeskyFactor CholeskyFactor::FromDense(std::span<const double> a, int n) {
  RequireSize(a.size(), static_cast<std::size_t>(n) * n, "dense matrix");
  CholeskyFactor f;
  f.n_ = n;
  f.r_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  for (int i = 0; i < n; ++i) {
    double* ri = f.row(i);
    for (int j = i; j < n; ++j) ri[j - i] = a[static_cast<std::size_t>(i) * n + j];
  }
  const simd::Kernels& k = simd::kernels();
  // Right-looking elimination on packed rows.
  for (int i = 0; i < n; ++i) {
    double* ri = f.row(i);
    const double pivot = ri[0];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw FactorizationError("nonpositive pivot at row " +
                               std::to_string(i));
    }
    const double d = std::sqrt(pivot);
    ri[0] = d;
    k.scale(ri + 1, 1.0 / d, n - i - 1);
    for (int j = i + 1; j < n; ++j) {
      const double rij = ri[j - i];
      if (rij == 0.0) continue;
      k.axpy(f.row(j), -rij, ri + (j - i), n - j);
    }
  }
  return f;
}

void CholeskyFactor::rank1_update(std::span<const double> x) {
  RequireSize(x.size(), n_, "update vector");
  ++update_count_;
  NodeVector w(x.begin(), x.end());
  const simd::Kernels& k = simd::kernels();
  for (int i = static_cast<int>(FirstNonzero(w)); i < n_; ++i) {
    if (w[i] == 0.0) continue;
    double* ri = row(i);
    const double r = std::hypot(ri[0], w[i]);
    const double c = ri[0] / r;
    const double s = w[i] / r;
    ri[0] = r;
    w[i] = 0.0;
    k.givens(ri + 1, w.data() + i + 1, n_ - i - 1, c, s);
  }
}

bool CholeskyFactor::rank1_downdate(std::span<const double> x) {
  RequireSize(x.size(), n_, "downdate vector");
  ++update_count_;
  NodeVector w(x.begin(), x.end());
  const simd::Kernels& k = simd::kernels();
  for (int i = static_cast<int>(FirstNonzero(w)); i < n_; ++i) {
    if (w[i] == 0.0) continue;
    double* ri = row(i);
    const double rii = ri[0];
    const double rho2 = (rii - w[i]) * (rii + w[i]);
    if (!(rho2 > kDowndatePivotFloor * rii * rii) || !std::isfinite(rho2)) {
      return false;
    }
    const double rho = std::sqrt(rho2);
    const double c = rho / rii;
    const double s = w[i] / rii;
    ri[0] = rho;
    w[i] = 0.0;
    k.hyperbolic(ri + 1, w.data() + i + 1, n_ - i - 1, c, s);
  }
  return true;
}

NodeVector CholeskyFactor::solve(std::span<const double> b) const {
  RequireSize(b.size(), n_, "right-hand side");
  const simd::Kernels& k = simd::kernels();
  NodeVector y(b.begin(), b.end());
  // R^T y = b, column sweep over rows of R.
  for (int i = 0; i < n_; ++i) {
    const double* ri = row(i);
    y[i] /= ri[0];
    if (y[i] != 0.0) k.axpy(y.data() + i + 1, -y[i], ri + 1, n_ - i - 1);
  }
  // R x = y.
  for (int i = n_ - 1; i >= 0; --i) {
    const double* ri = row(i);
    const double s = k.dot(ri + 1, y.data() + i + 1, n_ - i - 1);
    y[i] = (y[i] - s) / ri[0];
  }
  return y;
}

std::vector<double> CholeskyFactor::gram() const {
  const std::size_t n = n_;
  std::vector<double> g(n * n, 0.0);
  for (int k = 0; k < n_; ++k) {
    const double* rk = row(k);
    for (int i = k; i < n_; ++i) {
      const double a = rk[i - k];
      if (a == 0.0) continue;
      for (int j = k; j < n_; ++j) g[i * n + j] += a * rk[j - k];
    }
  }
  return g;
}

std::vector<double> augmented_laplacian(const Graph& graph,
                                        const ActiveMask& mask,
                                        const ComponentLabeling& labeling) {
  RequireSize(mask.size(), graph.edge_count(), "active mask");
  RequireSize(labeling.label.size(), graph.node_count(), "labeling");
  const std::size_t n = graph.node_count();
  std::vector<double> a(n * n, 0.0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (!mask[e]) continue;
    const std::size_t u = graph.edge(e).tail;
    const std::size_t w = graph.edge(e).head;
    a[u * n + u] += 1.0;
    a[w * n + w] += 1.0;
    a[u * n + w] -= 1.0;
    a[w * n + u] -= 1.0;
  }
  for (const auto& comp : labeling.members) {
    const double inv = 1.0 / static_cast<double>(comp.size());
    for (int u : comp) {
      for (int w : comp) a[u * n + w] += inv;
    }
  }
  return a;
}

CholeskyFactor factorize(const Graph& graph, const ActiveMask& mask,
                         const ComponentLabeling& labeling) {
  try {
    return CholeskyFactor::FromDense(augmented_laplacian(graph, mask, labeling),
                                     graph.node_count());
  } catch (const FactorizationError& err) {
    throw FactorizationError(
        std::string("L + NN^T is not positive definite; labeling does not "
                    "match the active mask (") +
        err.what() + ")");
  }
}

NodeVector pinv_apply(const CholeskyFactor& factor,
                      const ComponentLabeling& labeling,
                      std::span<const double> b) {
  RequireSize(b.size(), factor.size(), "pinv input");
  NodeVector x = factor.solve(labeling.project(b));
  return labeling.project(x);
}

}  // namespace qrot
