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


#ifndef QROT_HARNESS_H_
#define QROT_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrot/common.h"
#include "qrot/decomposition.h"
#include "qrot/generators.h"
#include "qrot/graph.h"
#include "qrot/solver.h"

namespace qrot {

enum class SolverKind { kHessUpdate, kGradDescent, kPrecondGrad, kOracle };

// "hessupdate", "graddescent", "precondgrad", "oracle".
std::string_view solver_name(SolverKind kind);
SolverKind parse_solver(std::string_view name);

struct Instance {
  Graph graph;
  MassVector mass;
};

// gen_random_graph(n, seed) with a mass vector whose seed is derived from
// `seed`.
Instance make_instance(int n, std::uint64_t seed,
                       CostModel costs = CostModel::kUnit);

struct BenchSpec {
  std::vector<int> sizes;
  std::vector<double> alphas;
  int seeds_per_cell = 10;
  std::vector<SolverKind> solvers;
  int max_iter = 3000;
  double grad_tol = 1e-8;
  // Instance seeds are base_seed, base_seed + 1, ...
  std::uint64_t base_seed = 0;
  CostModel costs = CostModel::kUnit;
  // Instances solved concurrently; each solve stays single-threaded.
  int threads = 1;

  void validate() const;
};

struct BenchRecord {
  int size = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string solver;
  double wall_time = 0.0;
  int iterations = 0;
  bool converged = false;
  // |value - reference| / |reference|, where the reference is hessupdate at
  // gradient tolerance 1e-12 with no practical iteration cap. Empty for
  // the oracle, failed runs and unconverged references.
  std::optional<double> relative_error;
  double l1_cost = 0.0;
  // Exception text when the run failed.
  std::string error;
};

// Mean over the seeds of one (size, alpha, solver) cell. The error mean
// covers the runs that have one.
struct BenchCell {
  int size = 0;
  double alpha = 0.0;
  std::string solver;
  int runs = 0;
  int converged = 0;
  double mean_time = 0.0;
  double mean_iterations = 0.0;
  std::optional<double> mean_relative_error;
  double mean_l1_cost = 0.0;
};

// Records ordered by (size, alpha, seed, solver as listed in the spec).
std::vector<BenchRecord> bench(const BenchSpec& spec);
std::vector<BenchCell> aggregate(std::span<const BenchRecord> records);

// Columns: size, alpha, seed, solver, time_s, iters, converged, rel_err,
// l1_cost. Empty fields are left blank.
void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);
// Columns: size, alpha, solver, runs, converged, time_s, iters, rel_err,
// l1_cost.
void write_cells_csv(std::ostream& out, std::span<const BenchCell> cells);

struct SparsityRow {
  int size = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  bool converged = false;
  int iterations = 0;
  double l1_cost = 0.0;
  double lp_optimum = 0.0;
  // |c^T J - LP*| / LP*; empty when the run is excluded.
  std::optional<double> relative_difference;
};

struct SparsityCell {
  int size = 0;
  double alpha = 0.0;
  int runs = 0;
  int excluded = 0;
  std::optional<double> mean_relative_difference;
  std::optional<double> max_relative_difference;
};

struct SparsityTable {
  std::vector<SparsityRow> rows;
  std::vector<SparsityCell> cells;
};

// hessupdate against the LP oracle on make_instance(size, base_seed + i).
// Unconverged runs are kept in rows but excluded from the cells.
SparsityTable exp_sparsity(std::span<const int> sizes,
                           std::span<const double> alphas, int seeds,
                           const SolverConfig& base = {},
                           std::uint64_t base_seed = 0,
                           CostModel costs = CostModel::kUnit);

void write_sparsity_csv(std::ostream& out, const SparsityTable& table);

struct MonotonicityOptions {
  // Absolute bound on |grad g| for every solve.
  double grad_tol = 1e-12;
  int max_iter = 200000;
  std::uint64_t seed = 0;
  // Path flows closer than this (relative to the largest flow) are equal.
  double diff_rel_tol = 1e-8;
  // Allowed divergence mismatch between the two solutions of a pair,
  // relative to the largest |f|.
  double div_rel_tol = 1e-7;
  // Residual bound for the span check, relative to max(1, |J|).
  double span_rel_tol = 1e-6;
  // Tolerance for the cost / norm / epsilon ordering checks.
  double order_tol = 1e-8;
};

struct MonotonicityLevel {
  double alpha = 0.0;
  bool converged = false;
  int iterations = 0;
  double l1_cost = 0.0;
  double squared_norm = 0.0;
  FlowVector flow;
};

// One divergence-free loop: its edge support and coefficient.
struct LoopTerm {
  double epsilon = 0.0;
  // Edges where R is nonzero, with R's value (+-1 multiples).
  std::vector<int> edges;
  std::vector<double> values;
  std::vector<std::vector<int>> minus_paths;
  std::vector<std::vector<int>> plus_paths;
};

// J^{alpha_hi} = J^{alpha_lo} + sum epsilon_k R_k.
struct PairDiff {
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  std::vector<LoopTerm> terms;
  // Max |Jhat_hi - Jhat_lo - sum eps Rhat| on the path universe.
  double path_residual = 0.0;
  std::string error;
};

struct MonotonicityReport {
  std::vector<MonotonicityLevel> levels;
  std::vector<PairDiff> pairs;
  // c^T J nondecreasing and |J|^2 nonincreasing along the grid.
  bool cost_nondecreasing = true;
  bool norm_nonincreasing = true;
  // Loops of the (first, last) difference; every intermediate solution is
  // fit as J^{alpha_first} + sum x_k R_k.
  std::vector<LoopTerm> span_basis;
  // coefficients[j][k] = x_k at level j (0 at the first level).
  std::vector<std::vector<double>> coefficients;
  double max_span_residual = 0.0;
  bool in_span = true;
  bool coefficients_monotone = true;
  bool aborted = false;
  std::vector<std::string> notes;
};

// Solves at each alpha of an increasing grid and reports how consecutive
// solutions differ by divergence-free loops. Nothing here is asserted; the
// flags describe what was observed.
MonotonicityReport exp_monotonicity(const Graph& graph,
                                    std::span<const double> f,
                                    std::span<const double> alpha_grid,
                                    const MonotonicityOptions& options = {});

}  // namespace qrot

#endif  // QROT_HARNESS_H_
