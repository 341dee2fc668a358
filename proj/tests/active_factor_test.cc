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


#include "qrot/active_factor.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qrot/generators.h"
#include "qrot/random.h"

namespace qrot {
namespace {

double RelativeFactorError(const Graph& g, const ActiveFactor& af) {
  const int n = g.node_count();
  const std::vector<double> want = augmented_laplacian(g, af.mask(), af.labeling());
  const std::vector<double> got = af.factor().gram();
  double diff = 0.0, norm = 0.0;
  for (int i = 0; i < n * n; ++i) {
    diff += (got[i] - want[i]) * (got[i] - want[i]);
    norm += want[i] * want[i];
  }
  return std::sqrt(diff / norm);
}

ActiveMask RandomMask(Rng& rng, int m, double p) {
  ActiveMask mask(m);
  for (auto& x : mask) x = rng.uniform() < p;
  return mask;
}

TEST(ActiveFactorTest, SingleFlipsTrackLaplacian) {
  const Graph g = gen_random_graph(60, 1);
  Rng rng(2);
  ActiveFactor af(g, RandomMask(rng, g.edge_count(), 0.3), 100000);
  for (int step = 0; step < 200; ++step) {
    ActiveMask next = af.mask();
    const int e = static_cast<int>(rng.below(g.edge_count()));
    next[e] ^= 1;
    const TransitionStats st = af.transition(next);
    EXPECT_EQ(st.activated + st.deactivated, 1);
    ASSERT_EQ(af.mask(), next);
    EXPECT_LE(RelativeFactorError(g, af), 1e-10) << "step " << step;
  }
  // Labels agree with a fresh component search.
  const ComponentLabeling fresh = components(g, af.mask());
  EXPECT_EQ(fresh.count(), af.labeling().count());
}

TEST(ActiveFactorTest, BulkTransitions) {
  const Graph g = gen_random_graph(80, 3);
  Rng rng(4);
  ActiveFactor af(g, RandomMask(rng, g.edge_count(), 0.5), 100000);
  for (int step = 0; step < 30; ++step) {
    ActiveMask next = af.mask();
    for (auto& x : next) {
      if (rng.uniform() < 0.1) x ^= 1;
    }
    af.transition(next);
    EXPECT_LE(RelativeFactorError(g, af), 1e-10);
  }
}

TEST(ActiveFactorTest, EventVectorsSumToChange) {
  const Graph g = gen_random_graph(20, 5);
  Rng rng(6);
  const ActiveMask m0 = RandomMask(rng, g.edge_count(), 0.4);
  ActiveFactor af(g, m0);
  const std::vector<double> before = augmented_laplacian(g, m0, af.labeling());
  ActiveMask m1 = m0;
  for (auto& x : m1) {
    if (rng.uniform() < 0.3) x ^= 1;
  }
  af.transition(m1);
  const int n = g.node_count();
  std::vector<double> sum = before;
  for (const FactorEvent& ev : af.last_events()) {
    const double sign = ev.is_update() ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sum[i * n + j] += sign * ev.vector[i] * ev.vector[j];
    }
  }
  const std::vector<double> after = augmented_laplacian(g, m1, af.labeling());
  for (int i = 0; i < n * n; ++i) EXPECT_NEAR(sum[i], after[i], 1e-12);
}

TEST(ActiveFactorTest, PeriodicRefactorization) {
  const Graph g = gen_random_graph(30, 7);
  Rng rng(8);
  ActiveFactor af(g, ActiveMask(g.edge_count(), 0), 5);
  for (int step = 0; step < 40; ++step) {
    ActiveMask next = af.mask();
    next[rng.below(g.edge_count())] ^= 1;
    af.transition(next);
  }
  EXPECT_GT(af.refactorizations(), 0);
  EXPECT_LE(RelativeFactorError(g, af), 1e-12);
}

TEST(ActiveFactorTest, PinvOnActiveSubgraph) {
  const Graph g = gen_random_graph(12, 9);
  Rng rng(10);
  ActiveFactor af(g, RandomMask(rng, g.edge_count(), 0.5));
  std::vector<double> b(12);
  for (double& v : b) v = rng.uniform(-1.0, 1.0);
  const NodeVector x = af.pinv_apply(b);
  // L x = P b, and x is orthogonal to the null space.
  const NodeVector lx = active_laplacian_apply(g, af.mask(), x);
  const NodeVector pb = af.labeling().project(b);
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(lx[i], pb[i], 1e-10);
  for (double c : af.labeling().null_coefficients(x)) EXPECT_NEAR(c, 0.0, 1e-12);
}

TEST(ActiveFactorTest, RejectsBadMask) {
  const Graph g = gen_random_graph(10, 1);
  EXPECT_THROW(ActiveFactor(g, ActiveMask(3, 0)), InvalidInput);
  EXPECT_THROW(ActiveFactor(g, ActiveMask(g.edge_count(), 0), 0), InvalidInput);
}

}  // namespace
}  // namespace qrot
