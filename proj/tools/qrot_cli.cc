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


// Command-line front end: solvers, generators and experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrot/baselines.h"
#include "qrot/decomposition.h"
#include "qrot/generators.h"
#include "qrot/harness.h"
#include "qrot/io.h"
#include "qrot/serialize.h"
#include "qrot/solver.h"

namespace {

using namespace qrot;

constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void Emit(const std::string& path, Fn fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  fn(out);
}

CostModel ParseCosts(const std::string& s) {
  if (s == "unit") return CostModel::kUnit;
  if (s == "uniform") return CostModel::kUniform;
  throw InvalidInput("--costs must be unit or uniform");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratically regularized optimal transport on graphs"};
  app.require_subcommand(1);

  // solve
  std::string graph_path, mass_path, flow_out, solver = "hessupdate";
  double alpha = 1.0, tol = 1e-8;
  int max_iter = 3000;
  std::uint64_t seed = 0;
  bool as_json = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the regularized problem");
  solve_cmd->add_option("graph", graph_path, "Graph file")->required();
  solve_cmd->add_option("mass", mass_path, "Mass file")->required();
  solve_cmd->add_option("--alpha", alpha, "Regularization weight")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", tol, "Gradient norm tolerance");
  solve_cmd->add_option("--max-iter", max_iter, "Iteration cap");
  solve_cmd->add_option("--seed", seed, "Seed of the initial potential");
  solve_cmd->add_option("--solver", solver,
                        "hessupdate, graddescent or precondgrad");
  solve_cmd->add_option("--flow-out", flow_out, "Write the flow here");
  solve_cmd->add_flag("--json", as_json, "Print the report as JSON");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact unregularized optimum");
  oracle_cmd->add_option("graph", graph_path, "Graph file")->required();
  oracle_cmd->add_option("mass", mass_path, "Mass file")->required();
  oracle_cmd->add_option("--flow-out", flow_out, "Write the flow here");

  // decompose
  std::string flow_in;
  auto* decompose_cmd =
      app.add_subcommand("decompose", "Path/cycle decomposition of a flow");
  decompose_cmd->add_option("graph", graph_path, "Graph file")->required();
  decompose_cmd->add_option("--flow-in", flow_in, "Flow file")->required();
  decompose_cmd->add_option("--mass", mass_path,
                            "Mass file (default: the flow's divergence)");

  // generators
  int nodes = 0, side = 0;
  std::string out_path, costs = "unit";
  auto* gen_graph_cmd = app.add_subcommand("gen-graph", "Random graph");
  gen_graph_cmd->add_option("--nodes", nodes, "Node count")->required();
  gen_graph_cmd->add_option("--seed", seed, "Seed");
  gen_graph_cmd->add_option("--costs", costs, "unit or uniform");
  gen_graph_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* gen_grid_cmd = app.add_subcommand("gen-grid", "Square lattice");
  gen_grid_cmd->add_option("--side", side, "Side length")->required();
  gen_grid_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* gen_mass_cmd = app.add_subcommand("gen-mass", "Random mass vector");
  gen_mass_cmd->add_option("graph", graph_path, "Graph file")->required();
  gen_mass_cmd->add_option("--seed", seed, "Seed");
  gen_mass_cmd->add_option("--out", out_path, "Output file (default stdout)");

  // bench
  std::string spec_path, cells_path;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark grid to CSV");
  bench_cmd->add_option("--spec", spec_path, "JSON bench spec")->required();
  bench_cmd->add_option("--out", out_path, "Per-run CSV (default stdout)");
  bench_cmd->add_option("--cells", cells_path, "Per-cell mean CSV");

  // experiments
  std::vector<int> sizes = {50, 100};
  std::vector<double> alphas = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1};
  int seeds = 10;
  auto* sparsity_cmd = app.add_subcommand(
      "exp-sparsity", "Regularized L1 cost against the LP optimum");
  sparsity_cmd->add_option("--sizes", sizes, "Node counts")->delimiter(',');
  sparsity_cmd->add_option("--alphas", alphas, "Alpha grid")->delimiter(',');
  sparsity_cmd->add_option("--seeds", seeds, "Instances per size");
  sparsity_cmd->add_option("--base-seed", seed, "First instance seed");
  sparsity_cmd->add_option("--out", out_path, "CSV output (default stdout)");

  std::vector<double> grid = {1e-4, 1e-2, 1, 10};
  auto* mono_cmd = app.add_subcommand(
      "exp-monotonicity", "Divergence-free differences along an alpha grid");
  mono_cmd->add_option("graph", graph_path, "Graph file");
  mono_cmd->add_option("mass", mass_path, "Mass file");
  mono_cmd->add_option("--nodes", nodes,
                       "Use a random instance of this size instead");
  mono_cmd->add_option("--seed", seed, "Instance seed with --nodes");
  mono_cmd->add_option("--alphas", grid, "Increasing alpha grid")
      ->delimiter(',');
  mono_cmd->add_option("--out", out_path, "JSON output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const Graph graph = read_graph_file(graph_path);
      const MassVector f = read_mass_file(mass_path, graph.node_count());
      SolverConfig config;
      config.alpha = alpha;
      config.grad_tol = tol;
      config.max_iter = max_iter;
      config.seed = seed;
      SolveReport r;
      switch (parse_solver(solver)) {
        case SolverKind::kHessUpdate:
          r = qrot::solve(graph, f, config);
          break;
        case SolverKind::kGradDescent:
          r = gradient_ascent(graph, f, config);
          break;
        case SolverKind::kPrecondGrad:
          r = precond_gradient(graph, f, config);
          break;
        case SolverKind::kOracle:
          throw InvalidInput("use the oracle subcommand");
      }
      std::cout << (as_json ? to_json(r, false) : to_text(r));
      if (!flow_out.empty()) write_flow_file(flow_out, r.flow);
    } else if (*oracle_cmd) {
      const Graph graph = read_graph_file(graph_path);
      const MassVector f = read_mass_file(mass_path, graph.node_count());
      const OracleResult o = lp_oracle(graph, f);
      std::cout.precision(17);
      std::cout << "optimal_value=" << o.optimal_value << '\n'
                << "augmentations=" << o.augmentations << '\n';
      if (!flow_out.empty()) write_flow_file(flow_out, o.flow);
    } else if (*decompose_cmd) {
      const Graph graph = read_graph_file(graph_path);
      const FlowVector flow = read_flow_file(flow_in, graph.edge_count());
      const PathDecomposition d =
          mass_path.empty()
              ? decompose(graph, flow)
              : decompose(graph, flow,
                          read_mass_file(mass_path, graph.node_count()));
      std::cout << to_json(d);
    } else if (*gen_graph_cmd) {
      const Graph g = gen_random_graph(nodes, seed, ParseCosts(costs));
      Emit(out_path, [&](std::ostream& o) { write_graph(o, g); });
    } else if (*gen_grid_cmd) {
      const Graph g = gen_grid(side);
      Emit(out_path, [&](std::ostream& o) { write_graph(o, g); });
    } else if (*gen_mass_cmd) {
      const Graph graph = read_graph_file(graph_path);
      const MassVector f = gen_mass(graph, seed);
      Emit(out_path, [&](std::ostream& o) { write_mass(o, f); });
    } else if (*bench_cmd) {
      const BenchSpec spec = read_bench_spec_file(spec_path);
      const std::vector<BenchRecord> records = bench(spec);
      Emit(out_path, [&](std::ostream& o) { write_bench_csv(o, records); });
      if (!cells_path.empty()) {
        const std::vector<BenchCell> cells = aggregate(records);
        Emit(cells_path, [&](std::ostream& o) { write_cells_csv(o, cells); });
      }
    } else if (*sparsity_cmd) {
      const SparsityTable t = exp_sparsity(sizes, alphas, seeds, {}, seed);
      Emit(out_path, [&](std::ostream& o) { write_sparsity_csv(o, t); });
      for (const SparsityCell& c : t.cells) {
        std::cerr << "n=" << c.size << " alpha=" << c.alpha
                  << " runs=" << c.runs << " excluded=" << c.excluded
                  << " mean_rel_diff="
                  << (c.mean_relative_difference
                          ? std::to_string(*c.mean_relative_difference)
                          : std::string("-"))
                  << '\n';
      }
    } else if (*mono_cmd) {
      if (nodes <= 0 && (graph_path.empty() || mass_path.empty())) {
        throw InvalidInput("need a graph and a mass file, or --nodes");
      }
      const Instance inst = [&] {
        if (nodes > 0) return make_instance(nodes, seed);
        Graph g = read_graph_file(graph_path);
        MassVector f = read_mass_file(mass_path, g.node_count());
        return Instance{std::move(g), std::move(f)};
      }();
      const MonotonicityReport r = exp_monotonicity(inst.graph, inst.mass, grid);
      Emit(out_path, [&](std::ostream& o) { o << to_json(r); });
    }
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
