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


#include "qrot/serialize.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qrot {
namespace {

using nlohmann::json;

json PathsJson(const std::vector<PathFlow>& list) {
  json out = json::array();
  for (const PathFlow& pf : list) {
    out.push_back({{"nodes", pf.path.nodes}, {"flow", pf.flow}});
  }
  return out;
}

json LoopJson(const LoopTerm& loop) {
  return {{"epsilon", loop.epsilon},
          {"edges", loop.edges},
          {"values", loop.values},
          {"minus_paths", loop.minus_paths},
          {"plus_paths", loop.plus_paths}};
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

template <typename T>
T Get(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw ParseError(std::string("missing key '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("key '") + key + "': " + e.what());
  }
}

}  // namespace

std::string to_text(const SolveReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "solver=" << r.solver << '\n'
      << "alpha=" << r.alpha << '\n'
      << "converged=" << (r.converged ? "true" : "false") << '\n'
      << "iterations=" << r.iterations << '\n'
      << "gradient_norm=" << r.gradient_norm << '\n'
      << "primal_value=" << r.primal_value << '\n'
      << "dual_value=" << r.dual_value << '\n'
      << "active_set_changes=" << r.active_set_changes << '\n'
      << "refactorizations=" << r.refactorizations << '\n'
      << "zero_step_events=" << r.zero_step_events << '\n'
      << "stages=" << r.stages << '\n'
      << "wall_time=" << r.wall_time << '\n';
  return out.str();
}

std::string to_json(const SolveReport& r, bool with_vectors) {
  json j = {{"solver", r.solver},
            {"alpha", r.alpha},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"gradient_norm", r.gradient_norm},
            {"primal_value", r.primal_value},
            {"dual_value", r.dual_value},
            {"active_set_changes", r.active_set_changes},
            {"refactorizations", r.refactorizations},
            {"zero_step_events", r.zero_step_events},
            {"stages", r.stages},
            {"wall_time", r.wall_time}};
  if (with_vectors) {
    j["p"] = r.p;
    j["flow"] = r.flow;
    j["dual_trace"] = r.dual_trace;
  }
  return Dump(j);
}

SolveReport solve_report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  SolveReport r;
  r.solver = Get<std::string>(j, "solver");
  r.alpha = Get<double>(j, "alpha");
  r.converged = Get<bool>(j, "converged");
  r.iterations = Get<int>(j, "iterations");
  r.gradient_norm = Get<double>(j, "gradient_norm");
  r.primal_value = Get<double>(j, "primal_value");
  r.dual_value = Get<double>(j, "dual_value");
  r.active_set_changes = Get<int>(j, "active_set_changes");
  r.refactorizations = Get<int>(j, "refactorizations");
  r.zero_step_events = Get<int>(j, "zero_step_events");
  r.stages = Get<int>(j, "stages");
  r.wall_time = Get<double>(j, "wall_time");
  if (j.contains("p")) r.p = Get<std::vector<double>>(j, "p");
  if (j.contains("flow")) r.flow = Get<std::vector<double>>(j, "flow");
  if (j.contains("dual_trace")) {
    r.dual_trace = Get<std::vector<double>>(j, "dual_trace");
  }
  return r;
}

std::string to_json(const OracleResult& o) {
  return Dump({{"optimal_value", o.optimal_value},
               {"augmentations", o.augmentations},
               {"flow", o.flow},
               {"node_potentials", o.node_potentials}});
}

std::string to_json(const PathDecomposition& d) {
  return Dump({{"paths", PathsJson(d.paths)}, {"cycles", PathsJson(d.cycles)}});
}

std::string to_json(const MonotonicityReport& r) {
  json levels = json::array();
  for (const MonotonicityLevel& l : r.levels) {
    levels.push_back({{"alpha", l.alpha},
                      {"converged", l.converged},
                      {"iterations", l.iterations},
                      {"l1_cost", l.l1_cost},
                      {"squared_norm", l.squared_norm}});
  }
  json pairs = json::array();
  for (const PairDiff& p : r.pairs) {
    json terms = json::array();
    for (const LoopTerm& t : p.terms) terms.push_back(LoopJson(t));
    json item = {{"alpha_lo", p.alpha_lo},
                 {"alpha_hi", p.alpha_hi},
                 {"terms", terms},
                 {"path_residual", p.path_residual}};
    if (!p.error.empty()) item["error"] = p.error;
    pairs.push_back(item);
  }
  json basis = json::array();
  for (const LoopTerm& t : r.span_basis) basis.push_back(LoopJson(t));
  return Dump({{"levels", levels},
               {"pairs", pairs},
               {"cost_nondecreasing", r.cost_nondecreasing},
               {"norm_nonincreasing", r.norm_nonincreasing},
               {"span_basis", basis},
               {"coefficients", r.coefficients},
               {"max_span_residual", r.max_span_residual},
               {"in_span", r.in_span},
               {"coefficients_monotone", r.coefficients_monotone},
               {"aborted", r.aborted},
               {"notes", r.notes}});
}

BenchSpec parse_bench_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("bench spec must be a JSON object");
  static const std::set<std::string> known = {
      "sizes",    "alphas",   "seeds_per_cell", "solvers", "max_iter",
      "grad_tol", "base_seed", "costs",         "threads"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ParseError("unknown bench spec key '" + item.key() + "'");
    }
  }
  BenchSpec spec;
  spec.sizes = Get<std::vector<int>>(j, "sizes");
  spec.alphas = Get<std::vector<double>>(j, "alphas");
  for (const std::string& name : Get<std::vector<std::string>>(j, "solvers")) {
    spec.solvers.push_back(parse_solver(name));
  }
  if (j.contains("seeds_per_cell")) spec.seeds_per_cell = Get<int>(j, "seeds_per_cell");
  if (j.contains("max_iter")) spec.max_iter = Get<int>(j, "max_iter");
  if (j.contains("grad_tol")) spec.grad_tol = Get<double>(j, "grad_tol");
  if (j.contains("base_seed")) spec.base_seed = Get<std::uint64_t>(j, "base_seed");
  if (j.contains("threads")) spec.threads = Get<int>(j, "threads");
  if (j.contains("costs")) {
    const std::string costs = Get<std::string>(j, "costs");
    if (costs == "unit") {
      spec.costs = CostModel::kUnit;
    } else if (costs == "uniform") {
      spec.costs = CostModel::kUniform;
    } else {
      throw ParseError("costs must be \"unit\" or \"uniform\"");
    }
  }
  spec.validate();
  return spec;
}

BenchSpec read_bench_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bench_spec(buf.str());
}

}  // namespace qrot
