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


#include "qrot/solver.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qrot/generators.h"
#include "qrot/random.h"

namespace qrot {
namespace {

using Rule = LineSearchResult::Rule;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

Graph SingleEdge(double cost) { return Graph(2, {{0, 1}}, {cost}); }

// A -> B cost 2, A -> C cost 1, C -> B cost 1.
Graph Triangle() { return Graph(3, {{0, 1}, {0, 2}, {2, 1}}, {2.0, 1.0, 1.0}); }

TEST(DualTest, ObjectiveAndGradientByHand) {
  const Graph g = Triangle();
  const std::vector<double> f = {-1.0, 1.0, 0.0};
  const DualState st = make_dual_state(g, {0.0, 3.0, 1.5});
  // v = (3-0-2, 1.5-0-1, 3-1.5-1) = (1, 0.5, 0.5)
  EXPECT_EQ(st.v, (EdgeVector{1.0, 0.5, 0.5}));
  EXPECT_EQ(st.mask, (ActiveMask{1, 1, 1}));
  // alpha f.p = 2 * 3 = 6, minus (1 + .25 + .25) / 2
  EXPECT_DOUBLE_EQ(dual_objective(st, f, 2.0), 6.0 - 0.75);
  // alpha f - D^T v: D^T v = (-1.5, 1.5, 0)
  const NodeVector grad = dual_gradient(g, st, f, 2.0);
  EXPECT_DOUBLE_EQ(grad[0], -2.0 + 1.5);
  EXPECT_DOUBLE_EQ(grad[1], 2.0 - 1.5);
  EXPECT_DOUBLE_EQ(grad[2], 0.0);
}

TEST(DualTest, GradientMatchesFiniteDifferences) {
  const Graph g = gen_random_graph(30, 11);
  const MassVector f = gen_mass(g, 12);
  Rng rng(13);
  int checked = 0;
  while (checked < 20) {
    DualPotential p(g.node_count());
    for (double& x : p) x = rng.uniform(-3.0, 3.0);
    const DualState st = make_dual_state(g, p);
    double gap = kInfinity;
    for (double v : st.v) gap = std::min(gap, std::abs(v));
    if (gap < 1e-3) continue;
    ++checked;
    const NodeVector grad = dual_gradient(g, st, f, 0.5);
    const double h = 1e-5;
    for (int i = 0; i < g.node_count(); ++i) {
      DualPotential a = p, b = p;
      a[i] += h;
      b[i] -= h;
      const double fd = (dual_objective(make_dual_state(g, a), f, 0.5) -
                         dual_objective(make_dual_state(g, b), f, 0.5)) /
                        (2 * h);
      EXPECT_NEAR(fd, grad[i], 1e-6 * std::max(1.0, std::abs(grad[i])));
    }
  }
}

TEST(LineSearchTest, FirstKinkStopsAtHittingTime) {
  const Graph g = SingleEdge(1.0);
  const std::vector<double> f = {-1.0, 1.0};
  const DualState st = make_dual_state(g, {0.0, 0.0});
  // Edge inactive with v = -1, s = (-1, 1), Ds = 2: linear until t = 1/2.
  const LineSearchResult ls = line_search(g, st, f, 1.0, std::vector<double>{-1.0, 1.0});
  EXPECT_EQ(ls.rule, Rule::kActiveSet);
  EXPECT_DOUBLE_EQ(ls.t, 0.5);
  EXPECT_EQ(ls.t_quadratic, kInfinity);
  EXPECT_EQ(ls.hits, std::vector<int>{0});
}

TEST(LineSearchTest, ExactWalksPastKink) {
  const Graph g = SingleEdge(1.0);
  const std::vector<double> f = {-1.0, 1.0};
  const DualState st = make_dual_state(g, {0.0, 0.0});
  // Past t = 1/2 the curvature is 4 and the slope 2: peak at t = 1.
  const LineSearchResult ls =
      exact_line_search(g, st, f, 1.0, std::vector<double>{-1.0, 1.0});
  EXPECT_EQ(ls.rule, Rule::kActiveSet);
  EXPECT_DOUBLE_EQ(ls.t, 1.0);
  EXPECT_DOUBLE_EQ(ls.t_active_set, 0.5);
  EXPECT_EQ(ls.hits, std::vector<int>{0});
}

TEST(LineSearchTest, QuadraticPeakInsidePiece) {
  const Graph g = SingleEdge(1.0);
  const std::vector<double> f = {-1.0, 1.0};
  // v = 2 - 1 = 1 active, alpha = 3: slope along (-1, 1) = 6 - 2 = 4,
  // curvature 4, peak t = 1; hitting time would be 1/2 backward (none).
  const DualState st = make_dual_state(g, {0.0, 2.0});
  for (bool exact : {false, true}) {
    const std::vector<double> s = {-1.0, 1.0};
    const LineSearchResult ls = exact ? exact_line_search(g, st, f, 3.0, s)
                                      : line_search(g, st, f, 3.0, s);
    EXPECT_EQ(ls.rule, Rule::kQuadratic);
    EXPECT_DOUBLE_EQ(ls.t, 1.0);
    EXPECT_TRUE(ls.hits.empty());
  }
}

TEST(LineSearchTest, NoAscentAndUnbounded) {
  const Graph g = SingleEdge(1.0);
  const std::vector<double> f = {-1.0, 1.0};
  const DualState st = make_dual_state(g, {0.0, 0.0});
  EXPECT_EQ(line_search(g, st, f, 1.0, std::vector<double>{1.0, -1.0}).rule,
            Rule::kNoAscent);
  // Mass pushed against the only edge: nothing ever activates.
  const std::vector<double> bad = {1.0, -1.0};
  const LineSearchResult ls =
      line_search(g, st, bad, 1.0, std::vector<double>{1.0, -1.0});
  EXPECT_EQ(ls.rule, Rule::kUnbounded);
  EXPECT_EQ(exact_line_search(g, st, bad, 1.0, std::vector<double>{1.0, -1.0}).rule,
            Rule::kUnbounded);
}

TEST(LineSearchTest, SimultaneousHits) {
  // Two parallel routes with identical slack hit together.
  const Graph g(3, {{0, 1}, {0, 2}}, {1.0, 1.0});
  const std::vector<double> f = {-2.0, 1.0, 1.0};
  const DualState st = make_dual_state(g, {0.0, 0.0, 0.0});
  const LineSearchResult ls =
      line_search(g, st, f, 1.0, std::vector<double>{-2.0, 1.0, 1.0});
  EXPECT_EQ(ls.rule, Rule::kActiveSet);
  EXPECT_DOUBLE_EQ(ls.t, 1.0 / 3.0);
  EXPECT_EQ(ls.hits, (std::vector<int>{0, 1}));
}

TEST(LineSearchTest, ExactIsAMaximizer) {
  const Graph g = gen_random_graph(40, 21);
  const MassVector f = gen_mass(g, 22);
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    DualPotential p(g.node_count());
    for (double& x : p) x = rng.uniform(-2.0, 2.0);
    const DualState st = make_dual_state(g, p);
    const NodeVector s = dual_gradient(g, st, f, 0.1);
    const LineSearchResult ls = exact_line_search(g, st, f, 0.1, s);
    ASSERT_GT(ls.t, 0.0);
    auto phi = [&](double t) {
      DualPotential q = p;
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += t * s[i];
      return dual_objective(make_dual_state(g, q), f, 0.1);
    };
    const double best = phi(ls.t);
    for (double scale : {0.0, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0}) {
      EXPECT_GE(best, phi(scale * ls.t) - 1e-10 * std::max(1.0, std::abs(best)));
    }
    // The first-kink step never goes further.
    EXPECT_LE(line_search(g, st, f, 0.1, s).t, ls.t * (1 + 1e-12));
  }
}

TEST(SolveTest, SingleEdgeClosedForm) {
  const double c = 1.5, m = 2.0;
  const Graph g = SingleEdge(c);
  for (double alpha : {1e-3, 0.5, 1.0, 7.0}) {
    SolverConfig config;
    config.alpha = alpha;
    const SolveReport r = solve(g, std::vector<double>{-m, m}, config);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.flow[0], m, 1e-10);
    const double w = c * m + alpha * m * m / 2;
    EXPECT_NEAR(r.primal_value, w, 1e-10);
    EXPECT_NEAR(r.dual_value, w, 1e-10);
  }
}

TEST(SolveTest, TriangleSplit) {
  SolverConfig config;
  config.alpha = 1.0;
  const SolveReport r = solve(Triangle(), std::vector<double>{-1.0, 1.0, 0.0}, config);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.flow[0], 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.flow[1], 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.flow[2], 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.primal_value, 7.0 / 3.0, 1e-10);
}

TEST(SolveTest, SmallAlphaTriangleUsesCheapRouteOnly) {
  const Graph g(3, {{0, 1}, {0, 2}, {2, 1}}, {1.5, 1.0, 1.0});
  SolverConfig config;
  config.alpha = 1e-3;
  const SolveReport r = solve(g, std::vector<double>{-1.0, 1.0, 0.0}, config);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.flow[0], 1.0, 1e-10);
  EXPECT_NEAR(r.flow[1], 0.0, 1e-10);
}

TEST(SolveTest, SingleNodeIsImmediate) {
  const Graph g(1, {}, {});
  const SolveReport r = solve(g, std::vector<double>{0.0}, SolverConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.flow.empty());
}

TEST(SolveTest, ErrorsAreReported) {
  const Graph g = SingleEdge(1.0);
  EXPECT_THROW(solve(g, std::vector<double>{-1.0, 0.5}, SolverConfig{}), InvalidInput);
  EXPECT_THROW(solve(g, std::vector<double>{-1.0}, SolverConfig{}), InvalidInput);
  SolverConfig bad;
  bad.alpha = 0.0;
  EXPECT_THROW(solve(g, std::vector<double>{-1.0, 1.0}, bad), InvalidInput);
  bad = {};
  bad.max_iter = 0;
  EXPECT_THROW(solve(g, std::vector<double>{-1.0, 1.0}, bad), InvalidInput);
  EXPECT_THROW(solve(g, std::vector<double>{1.0, -1.0}, SolverConfig{}), Infeasible);
}

TEST(SolveTest, DualAscentIsMonotone) {
  const Graph g = gen_random_graph(60, 31);
  const MassVector f = gen_mass(g, 32);
  SolverConfig config;
  config.alpha = 0.05;
  config.record_trace = true;
  config.continuation_start = config.alpha;  // one stage
  const SolveReport r = solve(g, f, config);
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(r.stages, 1);
  for (std::size_t i = 1; i < r.dual_trace.size(); ++i) {
    EXPECT_GE(r.dual_trace[i], r.dual_trace[i - 1] - 1e-9 * std::abs(r.dual_trace[i - 1]));
  }
}

TEST(SolveTest, ContinuationStagesShareBudget) {
  const Graph g = gen_random_graph(60, 41);
  const MassVector f = gen_mass(g, 42);
  SolverConfig config;
  config.alpha = 1e-4;
  const SolveReport r = solve(g, f, config);
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(r.stages, 8);  // 1, 1/4, ..., 1/4^6, 1e-4
  EXPECT_LE(r.iterations, config.max_iter);

  config.max_iter = 3;
  const SolveReport capped = solve(g, f, config);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.iterations, 3);
}

TEST(SolveTest, StrongDuality) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = gen_random_graph(50, seed);
    const MassVector f = gen_mass(g, seed + 100);
    for (double alpha : {1e-4, 1e-2, 1.0}) {
      SolverConfig config;
      config.alpha = alpha;
      const SolveReport r = solve(g, f, config);
      ASSERT_TRUE(r.converged);
      EXPECT_LE(std::abs(r.primal_value - r.dual_value),
                1e-6 * std::max(1.0, std::abs(r.primal_value)));
      // The recovered flow meets the divergence constraint.
      const NodeVector div = divergence(g, r.flow);
      for (int v = 0; v < g.node_count(); ++v) EXPECT_NEAR(div[v], f[v], 1e-6);
    }
  }
}

TEST(SolveTest, Deterministic) {
  const Graph g = gen_random_graph(50, 5);
  const MassVector f = gen_mass(g, 6);
  SolverConfig config;
  config.alpha = 1e-2;
  config.seed = 9;
  const SolveReport a = solve(g, f, config);
  const SolveReport b = solve(g, f, config);
  EXPECT_EQ(a.flow, b.flow);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(InitialPotentialTest, CenteredAndSeeded) {
  const DualPotential p = initial_potential(100, 3);
  double s = 0.0;
  for (double x : p) s += x;
  EXPECT_NEAR(s, 0.0, 1e-12);
  EXPECT_EQ(p, initial_potential(100, 3));
  EXPECT_NE(p, initial_potential(100, 4));
}

TEST(PrimalTest, Objective) {
  EXPECT_DOUBLE_EQ(primal_objective(std::vector<double>{1.0, 2.0},
                                    std::vector<double>{3.0, 1.0}, 2.0),
                   5.0 + 5.0);
  EXPECT_THROW(primal_objective(std::vector<double>{-1.0},
                                std::vector<double>{1.0}, 1.0),
               InvalidInput);
}

}  // namespace
}  // namespace qrot
