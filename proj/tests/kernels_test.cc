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


#include "qrot/simd/kernels.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qrot/cholesky.h"
#include "qrot/generators.h"
#include "qrot/random.h"
#include "qrot/solver.h"

namespace qrot::simd {
namespace {

std::vector<double> RandomVec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

class BackendGuard {
 public:
  BackendGuard() : saved_(active_backend()) {}
  ~BackendGuard() { set_backend(saved_); }

 private:
  Backend saved_;
};

class KernelsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (avx2_kernels() == nullptr) GTEST_SKIP() << "AVX2 not available";
  }
  const Kernels& ref() const { return scalar_kernels(); }
  const Kernels& vec() const { return *avx2_kernels(); }
};

// Lengths around the 4-wide vector width and its tails.
constexpr std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 9, 16, 31, 100, 257};

TEST_F(KernelsTest, Dot) {
  Rng rng(1);
  for (std::size_t n : kLengths) {
    const auto a = RandomVec(rng, n);
    const auto b = RandomVec(rng, n);
    const double want = ref().dot(a.data(), b.data(), n);
    EXPECT_NEAR(vec().dot(a.data(), b.data(), n), want, 1e-14 * (n + 1))
        << "n=" << n;
  }
}

TEST_F(KernelsTest, AxpyAndScale) {
  Rng rng(2);
  for (std::size_t n : kLengths) {
    const auto x = RandomVec(rng, n);
    auto y1 = RandomVec(rng, n);
    auto y2 = y1;
    ref().axpy(y1.data(), -0.7, x.data(), n);
    vec().axpy(y2.data(), -0.7, x.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
    ref().scale(y1.data(), 1.3, n);
    vec().scale(y2.data(), 1.3, n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
  }
}

TEST_F(KernelsTest, Rotations) {
  Rng rng(3);
  const double c = std::cos(0.4), s = std::sin(0.4);
  const double ch = std::cosh(0.3), sh = std::sinh(0.3);
  for (std::size_t n : kLengths) {
    auto r1 = RandomVec(rng, n), w1 = RandomVec(rng, n);
    auto r2 = r1, w2 = w1;
    ref().givens(r1.data(), w1.data(), n, c, s);
    vec().givens(r2.data(), w2.data(), n, c, s);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(r1[i], r2[i], 1e-15);
      EXPECT_NEAR(w1[i], w2[i], 1e-15);
    }
    ref().hyperbolic(r1.data(), w1.data(), n, ch, sh);
    vec().hyperbolic(r2.data(), w2.data(), n, ch, sh);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(r1[i], r2[i], 1e-14);
      EXPECT_NEAR(w1[i], w2[i], 1e-14);
    }
  }
}

TEST_F(KernelsTest, GivensMatchesDefinition) {
  std::vector<double> row = {1, 2, 3, 4, 5}, w = {5, 4, 3, 2, 1};
  const double c = 0.6, s = 0.8;
  vec().givens(row.data(), w.data(), 5, c, s);
  const double r0[] = {1, 2, 3, 4, 5}, w0[] = {5, 4, 3, 2, 1};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(row[i], c * r0[i] + s * w0[i], 1e-15);
    EXPECT_NEAR(w[i], c * w0[i] - s * r0[i], 1e-15);
  }
}

TEST(BackendTest, SelectAndRestore) {
  BackendGuard guard;
  set_backend(Backend::kScalar);
  EXPECT_EQ(active_backend(), Backend::kScalar);
  EXPECT_STREQ(backend_name(Backend::kScalar), "scalar");
  if (!backend_available(Backend::kAvx2)) {
    EXPECT_THROW(set_backend(Backend::kAvx2), std::invalid_argument);
  }
}

// Whole solves under both backends land on the same answer.
TEST_F(KernelsTest, SolveEquivalence) {
  BackendGuard guard;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Graph g = gen_random_graph(80, seed);
    const MassVector f = gen_mass(g, seed + 50);
    SolverConfig config;
    config.alpha = 1e-2;
    set_backend(Backend::kScalar);
    const SolveReport a = solve(g, f, config);
    set_backend(Backend::kAvx2);
    const SolveReport b = solve(g, f, config);
    ASSERT_TRUE(a.converged);
    ASSERT_TRUE(b.converged);
    EXPECT_NEAR(a.primal_value, b.primal_value,
                1e-9 * std::max(1.0, std::abs(a.primal_value)));
    for (std::size_t e = 0; e < a.flow.size(); ++e) {
      EXPECT_NEAR(a.flow[e], b.flow[e], 1e-6);
    }
  }
}

TEST_F(KernelsTest, FactorEquivalence) {
  BackendGuard guard;
  Rng rng(9);
  const int n = 37;
  std::vector<double> a(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i * n + j] = rng.uniform(-0.5, 0.5);
  }
  std::vector<double> spd(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = i == j ? n : 0.0;
      for (int k = 0; k < n; ++k) s += a[i * n + k] * a[j * n + k];
      spd[i * n + j] = s;
    }
  }
  const auto x = RandomVec(rng, n);
  auto run = [&](Backend b) {
    set_backend(b);
    CholeskyFactor r = CholeskyFactor::FromDense(spd, n);
    r.rank1_update(x);
    EXPECT_TRUE(r.rank1_downdate(x));
    return r;
  };
  const CholeskyFactor r1 = run(Backend::kScalar);
  const CholeskyFactor r2 = run(Backend::kAvx2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) EXPECT_NEAR(r1.at(i, j), r2.at(i, j), 1e-12);
  }
}

}  // namespace
}  // namespace qrot::simd
