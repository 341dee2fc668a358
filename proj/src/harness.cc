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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>
#include <utility>

#include "qrot/baselines.h"

namespace qrot {
namespace {

constexpr SolverKind kAllSolvers[] = {SolverKind::kHessUpdate,
                                      SolverKind::kGradDescent,
                                      SolverKind::kPrecondGrad,
                                      SolverKind::kOracle};

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double L1Cost(const Graph& graph, std::span<const double> flow) {
  return Dot(graph.costs(), flow);
}

std::string Real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string Opt(const std::optional<double>& x) {
  return x ? Real(*x) : std::string();
}

// Runs fn(i) for i in [0, count) on `threads` workers.
template <typename Fn>
void ParallelFor(int count, int threads, Fn fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

SolveReport RunIterative(SolverKind kind, const Instance& inst,
                         const SolverConfig& config) {
  switch (kind) {
    case SolverKind::kHessUpdate:
      return solve(inst.graph, inst.mass, config);
    case SolverKind::kGradDescent:
      return gradient_ascent(inst.graph, inst.mass, config);
    case SolverKind::kPrecondGrad:
      return precond_gradient(inst.graph, inst.mass, config);
    case SolverKind::kOracle:
      break;
  }
  throw std::logic_error("not an iterative solver");
}

LoopTerm MakeLoop(const Graph& graph, const DivergenceFreeDiff& diff, int k) {
  LoopTerm loop;
  const DivergenceFreeDiff::Term& term = diff.terms[k];
  loop.epsilon = term.epsilon;
  const EdgeVector r = diff.term_arc_flow(graph, k);
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (r[e] != 0.0) {
      loop.edges.push_back(e);
      loop.values.push_back(r[e]);
    }
  }
  for (int p : term.minus_paths) loop.minus_paths.push_back(diff.universe[p].nodes);
  for (int p : term.plus_paths) loop.plus_paths.push_back(diff.universe[p].nodes);
  return loop;
}

EdgeVector LoopFlow(const Graph& graph, const LoopTerm& loop) {
  EdgeVector r(graph.edge_count(), 0.0);
  for (std::size_t i = 0; i < loop.edges.size(); ++i) {
    r[loop.edges[i]] = loop.values[i];
  }
  return r;
}

// Least squares y ~ sum x_k cols[k] by modified Gram-Schmidt. Columns that
// are (numerically) in the span of earlier ones get x_k = 0 and are
// reported through `dependent`.
std::vector<double> FitColumns(const std::vector<EdgeVector>& cols,
                               const EdgeVector& y, double* residual,
                               bool* dependent) {
  const int k = static_cast<int>(cols.size());
  std::vector<EdgeVector> q;
  std::vector<int> kept;
  // r_[i][j]: coefficient of q_i in column kept[j].
  std::vector<std::vector<double>> rr(k, std::vector<double>(k, 0.0));
  *dependent = false;
  for (int j = 0; j < k; ++j) {
    EdgeVector w = cols[j];
    const double norm0 = Norm2(w);
    const int col = static_cast<int>(kept.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double d = Dot(q[i], w);
      rr[i][col] = d;
      for (std::size_t e = 0; e < w.size(); ++e) w[e] -= d * q[i][e];
    }
    const double norm = Norm2(w);
    if (!(norm > 1e-10 * std::max(1.0, norm0))) {
      *dependent = true;
      continue;
    }
    rr[q.size()][col] = norm;
    for (double& x : w) x /= norm;
    q.push_back(std::move(w));
    kept.push_back(j);
  }
  const int r = static_cast<int>(q.size());
  std::vector<double> b(r);
  EdgeVector rest = y;
  for (int i = 0; i < r; ++i) {
    b[i] = Dot(q[i], rest);
    for (std::size_t e = 0; e < rest.size(); ++e) rest[e] -= b[i] * q[i][e];
  }
  *residual = Norm2(rest);
  std::vector<double> z(r);
  for (int i = r - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < r; ++j) s -= rr[i][j] * z[j];
    z[i] = s / rr[i][i];
  }
  std::vector<double> x(k, 0.0);
  for (int i = 0; i < r; ++i) x[kept[i]] = z[i];
  return x;
}

double MaxAbs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kHessUpdate:
      return "hessupdate";
    case SolverKind::kGradDescent:
      return "graddescent";
    case SolverKind::kPrecondGrad:
      return "precondgrad";
    case SolverKind::kOracle:
      return "oracle";
  }
  return "?";
}

SolverKind parse_solver(std::string_view name) {
  for (SolverKind kind : kAllSolvers) {
    if (solver_name(kind) == name) return kind;
  }
  throw InvalidInput("unknown solver '" + std::string(name) +
                     "' (expected hessupdate, graddescent, precondgrad or "
                     "oracle)");
}

Instance make_instance(int n, std::uint64_t seed, CostModel costs) {
  Graph graph = gen_random_graph(n, seed, costs);
  MassVector mass = gen_mass(graph, SplitMix(seed ^ 0x6d617373ULL));
  return {std::move(graph), std::move(mass)};
}

void BenchSpec::validate() const {
  if (sizes.empty()) throw InvalidInput("bench: sizes is empty");
  if (alphas.empty()) throw InvalidInput("bench: alphas is empty");
  if (solvers.empty()) throw InvalidInput("bench: solvers is empty");
  for (int n : sizes) {
    if (n < 2) throw InvalidInput("bench: sizes must be >= 2");
  }
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InvalidInput("bench: alphas must be positive");
    }
  }
  if (seeds_per_cell < 1) throw InvalidInput("bench: seeds_per_cell must be >= 1");
  if (max_iter < 1) throw InvalidInput("bench: max_iter must be >= 1");
  if (!(grad_tol > 0.0)) throw InvalidInput("bench: grad_tol must be positive");
  if (threads < 1) throw InvalidInput("bench: threads must be >= 1");
}

std::vector<BenchRecord> bench(const BenchSpec& spec) {
  spec.validate();
  struct Task {
    int size;
    double alpha;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int n : spec.sizes) {
    for (double a : spec.alphas) {
      for (int i = 0; i < spec.seeds_per_cell; ++i) {
        tasks.push_back({n, a, spec.base_seed + static_cast<std::uint64_t>(i)});
      }
    }
  }
  const bool need_reference =
      std::any_of(spec.solvers.begin(), spec.solvers.end(),
                  [](SolverKind k) { return k != SolverKind::kOracle; });

  std::vector<std::vector<BenchRecord>> out(tasks.size());
  ParallelFor(static_cast<int>(tasks.size()), spec.threads, [&](int t) {
    const Task& task = tasks[t];
    auto base = [&](SolverKind kind) {
      BenchRecord rec;
      rec.size = task.size;
      rec.alpha = task.alpha;
      rec.seed = task.seed;
      rec.solver = std::string(solver_name(kind));
      return rec;
    };
    std::optional<Instance> inst;
    try {
      inst = make_instance(task.size, task.seed, spec.costs);
    } catch (const std::exception& e) {
      for (SolverKind kind : spec.solvers) {
        BenchRecord rec = base(kind);
        rec.error = e.what();
        out[t].push_back(std::move(rec));
      }
      return;
    }

    SolverConfig config;
    config.alpha = task.alpha;
    config.grad_tol = spec.grad_tol;
    config.max_iter = spec.max_iter;
    config.seed = task.seed;

    std::optional<double> reference;
    if (need_reference) {
      SolverConfig ref = config;
      ref.grad_tol = 1e-12;
      ref.alpha_scaled_tol = false;
      ref.max_iter = 1000000;
      try {
        const SolveReport r = solve(inst->graph, inst->mass, ref);
        if (r.converged) reference = r.dual_value;
      } catch (const std::exception&) {
      }
    }

    for (SolverKind kind : spec.solvers) {
      BenchRecord rec = base(kind);
      try {
        if (kind == SolverKind::kOracle) {
          const auto start = std::chrono::steady_clock::now();
          const OracleResult o = lp_oracle(inst->graph, inst->mass);
          rec.wall_time = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
          rec.iterations = o.augmentations;
          rec.converged = true;
          rec.l1_cost = o.optimal_value;
        } else {
          const SolveReport r = RunIterative(kind, *inst, config);
          rec.wall_time = r.wall_time;
          rec.iterations = r.iterations;
          rec.converged = r.converged;
          rec.l1_cost = L1Cost(inst->graph, r.flow);
          if (reference) {
            rec.relative_error = std::abs(r.dual_value - *reference) /
                                 std::max(std::abs(*reference), 1e-300);
          }
        }
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      out[t].push_back(std::move(rec));
    }
  });

  std::vector<BenchRecord> records;
  for (auto& group : out) {
    for (auto& rec : group) records.push_back(std::move(rec));
  }
  return records;
}

std::vector<BenchCell> aggregate(std::span<const BenchRecord> records) {
  // Cells keep first-appearance order, which is the record order.
  std::vector<BenchCell> cells;
  std::map<std::tuple<int, double, std::string>, std::size_t> index;
  std::vector<int> error_counts;
  for (const BenchRecord& rec : records) {
    const auto key = std::make_tuple(rec.size, rec.alpha, rec.solver);
    auto [it, fresh] = index.emplace(key, cells.size());
    if (fresh) {
      BenchCell cell;
      cell.size = rec.size;
      cell.alpha = rec.alpha;
      cell.solver = rec.solver;
      cells.push_back(cell);
      error_counts.push_back(0);
    }
    BenchCell& cell = cells[it->second];
    ++cell.runs;
    cell.converged += rec.converged;
    cell.mean_time += rec.wall_time;
    cell.mean_iterations += rec.iterations;
    cell.mean_l1_cost += rec.l1_cost;
    if (rec.relative_error) {
      cell.mean_relative_error =
          cell.mean_relative_error.value_or(0.0) + *rec.relative_error;
      ++error_counts[it->second];
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    BenchCell& cell = cells[i];
    cell.mean_time /= cell.runs;
    cell.mean_iterations /= cell.runs;
    cell.mean_l1_cost /= cell.runs;
    if (cell.mean_relative_error) *cell.mean_relative_error /= error_counts[i];
  }
  return cells;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "size,alpha,seed,solver,time_s,iters,converged,rel_err,l1_cost\n";
  for (const BenchRecord& r : records) {
    out << r.size << ',' << Real(r.alpha) << ',' << r.seed << ',' << r.solver
        << ',' << Real(r.wall_time) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << Opt(r.relative_error) << ','
        << (r.error.empty() ? Real(r.l1_cost) : std::string()) << '\n';
  }
}

void write_cells_csv(std::ostream& out, std::span<const BenchCell> cells) {
  out << "size,alpha,solver,runs,converged,time_s,iters,rel_err,l1_cost\n";
  for (const BenchCell& c : cells) {
    out << c.size << ',' << Real(c.alpha) << ',' << c.solver << ',' << c.runs
        << ',' << c.converged << ',' << Real(c.mean_time) << ','
        << Real(c.mean_iterations) << ',' << Opt(c.mean_relative_error) << ','
        << Real(c.mean_l1_cost) << '\n';
  }
}

SparsityTable exp_sparsity(std::span<const int> sizes,
                           std::span<const double> alphas, int seeds,
                           const SolverConfig& base, std::uint64_t base_seed,
                           CostModel costs) {
  if (sizes.empty() || alphas.empty() || seeds < 1) {
    throw InvalidInput("exp_sparsity: empty grid");
  }
  SparsityTable table;
  for (int n : sizes) {
    std::vector<Instance> instances;
    std::vector<double> optima;
    for (int i = 0; i < seeds; ++i) {
      instances.push_back(make_instance(n, base_seed + i, costs));
      optima.push_back(
          lp_oracle(instances.back().graph, instances.back().mass)
              .optimal_value);
    }
    for (double a : alphas) {
      SparsityCell cell;
      cell.size = n;
      cell.alpha = a;
      double sum = 0.0;
      for (int i = 0; i < seeds; ++i) {
        const Instance& inst = instances[i];
        SolverConfig config = base;
        config.alpha = a;
        config.seed = base_seed + i;
        const SolveReport r = solve(inst.graph, inst.mass, config);
        SparsityRow row;
        row.size = n;
        row.alpha = a;
        row.seed = base_seed + i;
        row.converged = r.converged;
        row.iterations = r.iterations;
        row.l1_cost = L1Cost(inst.graph, r.flow);
        row.lp_optimum = optima[i];
        ++cell.runs;
        if (r.converged) {
          const double d = std::abs(row.l1_cost - row.lp_optimum) /
                           std::max(std::abs(row.lp_optimum), 1e-300);
          row.relative_difference = d;
          sum += d;
          cell.max_relative_difference =
              std::max(cell.max_relative_difference.value_or(0.0), d);
        } else {
          ++cell.excluded;
        }
        table.rows.push_back(row);
      }
      if (cell.excluded < cell.runs) {
        cell.mean_relative_difference = sum / (cell.runs - cell.excluded);
      }
      table.cells.push_back(cell);
    }
  }
  return table;
}

void write_sparsity_csv(std::ostream& out, const SparsityTable& table) {
  out << "size,alpha,seed,converged,iters,l1_cost,lp_optimum,rel_diff\n";
  for (const SparsityRow& r : table.rows) {
    out << r.size << ',' << Real(r.alpha) << ',' << r.seed << ','
        << (r.converged ? 1 : 0) << ',' << r.iterations << ','
        << Real(r.l1_cost) << ',' << Real(r.lp_optimum) << ','
        << Opt(r.relative_difference) << '\n';
  }
}

MonotonicityReport exp_monotonicity(const Graph& graph,
                                    std::span<const double> f,
                                    std::span<const double> alpha_grid,
                                    const MonotonicityOptions& options) {
  validate_mass(graph, f);
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0) ||
        (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))) {
      throw InvalidInput("alpha grid must be positive and increasing");
    }
  }
  MonotonicityReport report;
  for (double a : alpha_grid) {
    SolverConfig config;
    config.alpha = a;
    config.grad_tol = options.grad_tol;
    config.alpha_scaled_tol = false;
    config.max_iter = options.max_iter;
    config.seed = options.seed;
    SolveReport r = solve(graph, f, config);
    MonotonicityLevel level;
    level.alpha = a;
    level.converged = r.converged;
    level.iterations = r.iterations;
    level.l1_cost = L1Cost(graph, r.flow);
    level.squared_norm = Dot(r.flow, r.flow);
    level.flow = std::move(r.flow);
    report.levels.push_back(std::move(level));
    if (!r.converged) {
      report.aborted = true;
      report.notes.push_back("solve at alpha " + Real(a) +
                             " did not converge; experiment aborted");
      return report;
    }
  }

  const int levels = static_cast<int>(report.levels.size());
  for (int j = 1; j < levels; ++j) {
    const MonotonicityLevel& lo = report.levels[j - 1];
    const MonotonicityLevel& hi = report.levels[j];
    if (hi.l1_cost < lo.l1_cost - options.order_tol) {
      report.cost_nondecreasing = false;
    }
    if (hi.squared_norm > lo.squared_norm + options.order_tol) {
      report.norm_nonincreasing = false;
    }
  }

  const double fscale = std::max(1.0, MaxAbs(f));
  std::vector<PathDecomposition> decomps;
  for (const MonotonicityLevel& level : report.levels) {
    decomps.push_back(decompose(graph, level.flow));
  }
  auto diff = [&](int hi, int lo, PairDiff* pair) -> std::optional<DivergenceFreeDiff> {
    pair->alpha_lo = report.levels[lo].alpha;
    pair->alpha_hi = report.levels[hi].alpha;
    const double scale = std::max(MaxAbs(report.levels[lo].flow),
                                  MaxAbs(report.levels[hi].flow));
    try {
      DivergenceFreeDiff d = divergence_free_diff(
          graph, decomps[hi], decomps[lo], f,
          options.diff_rel_tol * std::max(scale, 1e-300),
          options.div_rel_tol * fscale);
      for (int k = 0; k < static_cast<int>(d.terms.size()); ++k) {
        pair->terms.push_back(MakeLoop(graph, d, k));
      }
      pair->path_residual = MaxAbs(d.residual());
      return d;
    } catch (const Error& e) {
      pair->error = e.what();
      report.notes.push_back("difference between alpha " + Real(pair->alpha_lo) +
                             " and " + Real(pair->alpha_hi) + ": " + e.what());
      return std::nullopt;
    }
  };
  for (int j = 1; j < levels; ++j) {
    PairDiff pair;
    diff(j, j - 1, &pair);
    report.pairs.push_back(std::move(pair));
  }
  if (levels < 2) return report;

  PairDiff ends;
  if (!diff(levels - 1, 0, &ends)) {
    report.in_span = false;
    report.coefficients_monotone = false;
    return report;
  }
  report.span_basis = ends.terms;
  std::vector<EdgeVector> cols;
  for (const LoopTerm& loop : report.span_basis) cols.push_back(LoopFlow(graph, loop));
  const FlowVector& j0 = report.levels[0].flow;
  bool any_dependent = false;
  for (int j = 0; j < levels; ++j) {
    const FlowVector& jj = report.levels[j].flow;
    EdgeVector y(jj.size());
    for (std::size_t e = 0; e < y.size(); ++e) y[e] = jj[e] - j0[e];
    double residual = 0.0;
    bool dependent = false;
    std::vector<double> x = FitColumns(cols, y, &residual, &dependent);
    any_dependent |= dependent;
    const double bound = options.span_rel_tol * std::max(1.0, Norm2(jj));
    report.max_span_residual = std::max(report.max_span_residual, residual);
    if (residual > bound) report.in_span = false;
    report.coefficients.push_back(std::move(x));
  }
  if (any_dependent) {
    report.notes.push_back(
        "loops of the end-to-end difference are linearly dependent; "
        "coefficients are one of several fits");
  }
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (int j = 1; j < levels; ++j) {
      if (report.coefficients[j][k] <
          report.coefficients[j - 1][k] - options.order_tol) {
        report.coefficients_monotone = false;
      }
    }
  }
  return report;
}

}  // namespace qrot
