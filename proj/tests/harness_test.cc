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


#include "qrot/harness.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace qrot {
namespace {

TEST(SolverKindTest, Names) {
  for (SolverKind k : {SolverKind::kHessUpdate, SolverKind::kGradDescent,
                       SolverKind::kPrecondGrad, SolverKind::kOracle}) {
    EXPECT_EQ(parse_solver(solver_name(k)), k);
  }
  EXPECT_THROW(parse_solver("simplex"), InvalidInput);
}

TEST(InstanceTest, Deterministic) {
  const Instance a = make_instance(60, 5);
  const Instance b = make_instance(60, 5);
  EXPECT_EQ(a.mass, b.mass);
  EXPECT_EQ(a.graph.edge_count(), b.graph.edge_count());
}

TEST(BenchTest, RecordsAndCells) {
  BenchSpec spec;
  spec.sizes = {30};
  spec.alphas = {1e-2, 1.0};
  spec.seeds_per_cell = 2;
  spec.solvers = {SolverKind::kHessUpdate, SolverKind::kPrecondGrad, SolverKind::kOracle};
  const std::vector<BenchRecord> records = bench(spec);
  ASSERT_EQ(records.size(), 12u);
  EXPECT_EQ(records[0].solver, "hessupdate");
  EXPECT_EQ(records[2].solver, "oracle");
  EXPECT_EQ(records[3].seed, 1u);
  for (const BenchRecord& r : records) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GT(r.l1_cost, 0.0);
    if (r.solver == "oracle") {
      EXPECT_FALSE(r.relative_error.has_value());
    } else {
      ASSERT_TRUE(r.relative_error.has_value());
      EXPECT_GE(*r.relative_error, 0.0);
      if (r.converged) {
        EXPECT_LE(*r.relative_error, 1e-6);
      }
    }
  }
  const std::vector<BenchCell> cells = aggregate(records);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].runs, 2);
  EXPECT_NEAR(cells[0].mean_l1_cost, (records[0].l1_cost + records[3].l1_cost) / 2, 1e-12);
  EXPECT_FALSE(cells[2].mean_relative_error.has_value());

  std::ostringstream csv;
  write_bench_csv(csv, records);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "size,alpha,seed,solver,time_s,iters,converged,rel_err,l1_cost");
  EXPECT_EQ(first.rfind("30,0.01", 0), 0u);

  // Oracle rows leave rel_err blank.
  const std::string text = csv.str();
  EXPECT_NE(text.find(",oracle,"), std::string::npos);
  std::istringstream again(text);
  std::string line;
  while (std::getline(again, line)) {
    if (line.find(",oracle,") != std::string::npos) {
      EXPECT_NE(line.find(",,"), std::string::npos) << line;
    }
  }
}

TEST(BenchTest, ThreadsDoNotChangeResults) {
  BenchSpec spec;
  spec.sizes = {25};
  spec.alphas = {0.1};
  spec.seeds_per_cell = 4;
  spec.solvers = {SolverKind::kHessUpdate};
  const auto serial = bench(spec);
  spec.threads = 3;
  const auto parallel = bench(spec);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].seed, parallel[i].seed);
    EXPECT_EQ(serial[i].l1_cost, parallel[i].l1_cost);
    EXPECT_EQ(serial[i].iterations, parallel[i].iterations);
  }
}

TEST(BenchTest, InvalidSpec) {
  BenchSpec spec;
  EXPECT_THROW(bench(spec), InvalidInput);
  spec.sizes = {10};
  spec.alphas = {0.0};
  spec.solvers = {SolverKind::kOracle};
  EXPECT_THROW(bench(spec), InvalidInput);
}

TEST(SparsityTest, SmallAlphaMatchesLp) {
  const std::vector<int> sizes = {40};
  const std::vector<double> alphas = {1e-3, 10.0};
  const SparsityTable t = exp_sparsity(sizes, alphas, 3);
  ASSERT_EQ(t.rows.size(), 6u);
  ASSERT_EQ(t.cells.size(), 2u);
  EXPECT_EQ(t.cells[0].excluded, 0);
  EXPECT_LE(*t.cells[0].max_relative_difference, 1e-6);
  EXPECT_GT(*t.cells[1].mean_relative_difference, 1e-3);
}

TEST(SparsityTest, SingleEdgeHasNoGap) {
  // The flow on a single edge does not depend on alpha.
  const Graph g(2, {{0, 1}}, {2.0});
  for (double alpha : {1e-3, 1.0, 100.0}) {
    SolverConfig config;
    config.alpha = alpha;
    const SolveReport r = solve(g, std::vector<double>{-3.0, 3.0}, config);
    EXPECT_NEAR(2.0 * r.flow[0], 6.0, 1e-10);
  }
}

// A -> B cost 2, A -> C cost 1, C -> B cost 1; one unit from A to B.
// For alpha > 0 the direct share is j = 2/3 exactly (both routes cost 2).
TEST(MonotonicityTest, Triangle) {
  const Graph g(3, {{0, 1}, {0, 2}, {2, 1}}, {2.0, 1.0, 1.0});
  const std::vector<double> f = {-1.0, 1.0, 0.0};
  const std::vector<double> grid = {1e-4, 1.0, 100.0};
  const MonotonicityReport r = exp_monotonicity(g, f, grid);
  ASSERT_EQ(r.levels.size(), 3u);
  EXPECT_FALSE(r.aborted);
  for (const MonotonicityLevel& l : r.levels) {
    EXPECT_NEAR(l.flow[0], 2.0 / 3.0, 1e-9);
  }
  for (const PairDiff& p : r.pairs) {
    EXPECT_TRUE(p.error.empty()) << p.error;
    EXPECT_TRUE(p.terms.empty());
  }
  EXPECT_TRUE(r.cost_nondecreasing);
  EXPECT_TRUE(r.norm_nonincreasing);
}

// With a cheaper direct edge the split moves toward the detour as alpha
// grows: j(alpha) = min(1, (2 + 1/alpha * 0.5) / 3) for cost gap 0.5.
TEST(MonotonicityTest, TriangleWithGap) {
  const Graph g(3, {{0, 1}, {0, 2}, {2, 1}}, {1.5, 1.0, 1.0});
  const std::vector<double> f = {-1.0, 1.0, 0.0};
  const std::vector<double> grid = {1e-4, 0.5, 1.0, 100.0};
  const MonotonicityReport r = exp_monotonicity(g, f, grid);
  ASSERT_EQ(r.levels.size(), 4u);
  for (const MonotonicityLevel& l : r.levels) {
    const double j = std::min(1.0, (2.0 + 0.5 / l.alpha) / 3.0);
    EXPECT_NEAR(l.flow[0], j, 1e-9) << "alpha " << l.alpha;
  }
  // Below the threshold nothing moves.
  EXPECT_TRUE(r.pairs[0].terms.empty());
  ASSERT_EQ(r.pairs[1].terms.size(), 1u);
  ASSERT_EQ(r.pairs[2].terms.size(), 1u);
  EXPECT_GT(r.pairs[2].terms[0].epsilon, 0.0);
  ASSERT_EQ(r.span_basis.size(), 1u);
  EXPECT_TRUE(r.in_span);
  EXPECT_TRUE(r.coefficients_monotone);
  EXPECT_TRUE(r.cost_nondecreasing);
  EXPECT_TRUE(r.norm_nonincreasing);
  // The loop runs the detour forward and the direct edge backward.
  const LoopTerm& loop = r.span_basis[0];
  EXPECT_EQ(loop.edges, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(loop.values, (std::vector<double>{-1.0, 1.0, 1.0}));
}

TEST(MonotonicityTest, SingleLevelAndBadGrid) {
  const Graph g(2, {{0, 1}}, {1.0});
  const std::vector<double> f = {-1.0, 1.0};
  const std::vector<double> one = {1.0};
  const MonotonicityReport r = exp_monotonicity(g, f, one);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.levels.size(), 1u);
  const std::vector<double> bad = {1.0, 0.5};
  EXPECT_THROW(exp_monotonicity(g, f, bad), InvalidInput);
}

TEST(MonotonicityTest, RandomInstanceReports) {
  const Instance inst = make_instance(30, 2);
  const std::vector<double> grid = {1e-4, 1e-2, 1.0, 10.0};
  const MonotonicityReport r = exp_monotonicity(inst.graph, inst.mass, grid);
  EXPECT_FALSE(r.aborted);
  EXPECT_TRUE(r.cost_nondecreasing);
  EXPECT_TRUE(r.norm_nonincreasing);
  EXPECT_EQ(r.coefficients.size(), 4u);
  for (const PairDiff& p : r.pairs) {
    EXPECT_TRUE(p.error.empty()) << p.error;
    EXPECT_LE(p.path_residual, 1e-9);
  }
}

}  // namespace
}  // namespace qrot
