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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "dual_ascent.h"
#include "qrot/random.h"

namespace qrot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative floor on s^T L s against sum_e (Ds)_e^2.
constexpr double kFlatCurvature = 1e-14;
// Pseudo-Newton is skipped when |P grad| is this small relative to |grad|.
constexpr double kNullGradient = 1e-14;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool IsOdd(int k) { return (k & 1) != 0; }

class HessUpdatePolicy final : public internal::DirectionPolicy {
 public:
  HessUpdatePolicy(const Graph& graph, int refactor_period)
      : graph_(graph), refactor_period_(refactor_period) {}

  void start(const DualState& state) override {
    active_.emplace(graph_, state.mask, refactor_period_);
  }

  NodeVector direction(const DualState& /*state*/, const NodeVector& gradient,
                       int k) override {
    if (IsOdd(k)) {
      NodeVector s = gradient;
      CenterInPlace(s);
      return s;
    }
    return internal::pseudo_newton_or_gradient(active_->factor(),
                                               active_->labeling(), gradient);
  }

  void after_step(const DualState& state) override {
    active_->transition(state.mask);
  }

  bool newton_step(int k) const override { return !IsOdd(k); }

  int refactorizations() const override {
    return active_ ? active_->refactorizations() : 0;
  }

 private:
  const Graph& graph_;
  int refactor_period_;
  std::optional<ActiveFactor> active_;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInput("alpha must be positive and finite");
  }
  if (!(grad_tol > 0.0)) throw InvalidInput("grad_tol must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (refactor_period < 1) throw InvalidInput("refactor_period must be >= 1");
  if (!(hit_tie_rel_tol >= 0.0)) {
    throw InvalidInput("hit_tie_rel_tol must be nonnegative");
  }
  if (!(continuation_factor > 1.0)) {
    throw InvalidInput("continuation_factor must exceed 1");
  }
  if (!(continuation_rel_tol > 0.0)) {
    throw InvalidInput("continuation_rel_tol must be positive");
  }
}

void validate_mass(const Graph& graph, std::span<const double> f) {
  RequireSize(f.size(), graph.node_count(), "mass vector");
  double s = 0.0;
  for (double x : f) {
    if (!std::isfinite(x)) throw InvalidInput("mass vector has a non-finite entry");
    s += x;
  }
  if (std::abs(s) > 1e-9) {
    throw InvalidInput("mass vector is unbalanced: sum = " + std::to_string(s));
  }
}

DualState make_dual_state(const Graph& graph, DualPotential p) {
  DualState st;
  st.v = incidence_apply(graph, p);
  for (int e = 0; e < graph.edge_count(); ++e) st.v[e] -= graph.cost(e);
  st.mask = active_set_from_slack(st.v);
  st.p = std::move(p);
  return st;
}

SolverState make_solver_state(const Graph& graph, DualPotential p,
                              int refactor_period) {
  DualState dual = make_dual_state(graph, std::move(p));
  ActiveFactor active(graph, dual.mask, refactor_period);
  return SolverState{std::move(dual), std::move(active), 0};
}

double dual_objective(const DualState& state, std::span<const double> f,
                      double alpha) {
  RequireSize(f.size(), state.p.size(), "mass vector");
  double quad = 0.0;
  for (std::size_t e = 0; e < state.v.size(); ++e) {
    if (state.mask[e]) quad += state.v[e] * state.v[e];
  }
  return alpha * Dot(f, state.p) - 0.5 * quad;
}

NodeVector dual_gradient(const Graph& graph, const DualState& state,
                         std::span<const double> f, double alpha) {
  RequireSize(f.size(), graph.node_count(), "mass vector");
  NodeVector g(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) g[v] = alpha * f[v];
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (!state.mask[e]) continue;
    g[graph.edge(e).head] -= state.v[e];
    g[graph.edge(e).tail] += state.v[e];
  }
  return g;
}

namespace internal {

NodeVector pseudo_newton_or_gradient(const CholeskyFactor& factor,
                                     const ComponentLabeling& labeling,
                                     const NodeVector& gradient) {
  const NodeVector projected = labeling.project(gradient);
  const double gnorm = Norm2(gradient);
  NodeVector s;
  if (Norm2(projected) <= kNullGradient * gnorm) {
    s = gradient;
  } else {
    s = pinv_apply(factor, labeling, gradient);
    if (!(Dot(s, gradient) > 0.0)) s = gradient;
  }
  CenterInPlace(s);
  return s;
}

}  // namespace internal

NodeVector search_direction(const Graph& graph, const SolverState& state,
                            std::span<const double> f, double alpha, int k) {
  NodeVector g = dual_gradient(graph, state.dual, f, alpha);
  if (IsOdd(k)) {
    CenterInPlace(g);
    return g;
  }
  return internal::pseudo_newton_or_gradient(state.active.factor(),
                                             state.active.labeling(), g);
}

LineSearchResult line_search(const Graph& graph, const DualState& state,
                             std::span<const double> f, double alpha,
                             std::span<const double> s,
                             double hit_tie_rel_tol) {
  RequireSize(s.size(), graph.node_count(), "search direction");
  const EdgeVector ds = incidence_apply(graph, s);
  double slope = alpha * Dot(f, s);
  double curvature = 0.0;
  double full_curvature = 0.0;
  LineSearchResult out;
  std::vector<char> kink(graph.edge_count(), 0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double v = state.v[e];
    const double d = ds[e];
    full_curvature += d * d;
    const Edge& ed = graph.edge(e);
    const double kink_tol =
        64.0 * kEps *
        (std::abs(state.p[ed.head]) + std::abs(state.p[ed.tail]) + graph.cost(e));
    const bool on_kink = std::abs(v) <= kink_tol;
    kink[e] = on_kink;
    const bool in_piece = on_kink ? d > 0.0 : v > 0.0;
    if (in_piece) {
      slope -= v * d;
      curvature += d * d;
    }
    if (!on_kink && d != 0.0) {
      const double h = -v / d;
      if (h > 0.0 && h < out.t_active_set) out.t_active_set = h;
    }
  }
  if (!(slope > 0.0)) {
    out.rule = LineSearchResult::Rule::kNoAscent;
    out.t = 0.0;
    return out;
  }
  if (curvature > kFlatCurvature * full_curvature && curvature > 0.0) {
    out.t_quadratic = slope / curvature;
  }
  if (out.t_active_set < kInf) {
    const double limit = out.t_active_set * (1.0 + hit_tie_rel_tol);
    for (int e = 0; e < graph.edge_count(); ++e) {
      if (kink[e] || ds[e] == 0.0) continue;
      const double h = -state.v[e] / ds[e];
      if (h > 0.0 && h <= limit) out.hits.push_back(e);
    }
  }
  if (out.t_quadratic == kInf && out.t_active_set == kInf) {
    out.rule = LineSearchResult::Rule::kUnbounded;
    out.t = kInf;
    return out;
  }
  if (out.t_quadratic <= out.t_active_set) {
    out.rule = LineSearchResult::Rule::kQuadratic;
    out.t = out.t_quadratic;
    out.hits.clear();
  } else {
    out.rule = LineSearchResult::Rule::kActiveSet;
    out.t = out.t_active_set;
  }
  return out;
}

LineSearchResult exact_line_search(const Graph& graph, const DualState& state,
                                   std::span<const double> f, double alpha,
                                   std::span<const double> s) {
  RequireSize(s.size(), graph.node_count(), "search direction");
  const EdgeVector ds = incidence_apply(graph, s);
  // phi'(t) = slope - curvature * t on the current piece.
  double slope = alpha * Dot(f, s);
  double curvature = 0.0;
  double full_curvature = 0.0;
  std::vector<std::pair<double, int>> kinks;
  LineSearchResult out;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double v = state.v[e];
    const double d = ds[e];
    full_curvature += d * d;
    const Edge& ed = graph.edge(e);
    const double kink_tol =
        64.0 * kEps *
        (std::abs(state.p[ed.head]) + std::abs(state.p[ed.tail]) + graph.cost(e));
    const bool on_kink = std::abs(v) <= kink_tol;
    const bool in_piece = on_kink ? d > 0.0 : v > 0.0;
    if (in_piece) {
      slope -= v * d;
      curvature += d * d;
    }
    if (!on_kink && d != 0.0) {
      const double h = -v / d;
      if (h > 0.0) kinks.emplace_back(h, e);
    }
  }
  if (!(slope > 0.0)) {
    out.rule = LineSearchResult::Rule::kNoAscent;
    return out;
  }
  std::sort(kinks.begin(), kinks.end());
  if (!kinks.empty()) out.t_active_set = kinks.front().first;
  const double flat = kFlatCurvature * full_curvature;
  if (curvature > flat && curvature > 0.0) out.t_quadratic = slope / curvature;

  double t = 0.0;
  std::size_t i = 0;
  for (;;) {
    const double next = i < kinks.size() ? kinks[i].first : kInf;
    if (curvature > flat && curvature > 0.0) {
      const double peak = t + slope / curvature;
      if (peak <= next) {
        out.rule = i == 0 ? LineSearchResult::Rule::kQuadratic
                          : LineSearchResult::Rule::kActiveSet;
        out.t = peak;
        return out;
      }
    }
    if (next == kInf) {
      out.rule = LineSearchResult::Rule::kUnbounded;
      out.t = kInf;
      return out;
    }
    slope -= curvature * (next - t);
    t = next;
    // Cross every kink at this time; the slope is continuous there.
    for (; i < kinks.size() && kinks[i].first == t; ++i) {
      const double d = ds[kinks[i].second];
      curvature += d > 0.0 ? d * d : -d * d;
      out.hits.push_back(kinks[i].second);
    }
    if (curvature < 0.0) curvature = 0.0;
    if (!(slope > 0.0)) {
      out.rule = LineSearchResult::Rule::kActiveSet;
      out.t = t;
      return out;
    }
  }
}

TransitionStats apply_transition(const Graph& graph, SolverState& state,
                                 DualPotential p_new) {
  state.dual = make_dual_state(graph, std::move(p_new));
  return state.active.transition(state.dual.mask);
}

FlowVector recover_primal(const DualState& state, double alpha) {
  FlowVector j(state.v.size());
  for (std::size_t e = 0; e < j.size(); ++e) {
    j[e] = state.v[e] > 0.0 ? state.v[e] / alpha : 0.0;
  }
  return j;
}

double primal_objective(std::span<const double> flow,
                        std::span<const double> costs, double alpha) {
  RequireSize(flow.size(), costs.size(), "flow");
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t e = 0; e < flow.size(); ++e) {
    if (flow[e] < 0.0) {
      throw InvalidInput("negative flow on edge " + std::to_string(e));
    }
    lin += costs[e] * flow[e];
    quad += flow[e] * flow[e];
  }
  return lin + 0.5 * alpha * quad;
}

DualPotential initial_potential(int n, std::uint64_t seed) {
  Rng rng(seed);
  DualPotential p(n);
  for (double& x : p) x = rng.uniform();
  CenterInPlace(p);
  return p;
}

namespace internal {

SolveReport run_dual_ascent(const Graph& graph, std::span<const double> f_in,
                            const SolverConfig& config, DualPotential p0,
                            DirectionPolicy& policy, std::string name,
                            int first_k, int budget) {
  RequireSize(p0.size(), graph.node_count(), "initial potential");
  const auto start = std::chrono::steady_clock::now();

  // The constant part of f cannot be matched by any p; drop it.
  NodeVector f(f_in.begin(), f_in.end());
  CenterInPlace(f);
  const double alpha = config.alpha;

  SolveReport report;
  report.solver = std::move(name);
  report.alpha = alpha;

  DualState state = make_dual_state(graph, std::move(p0));
  policy.start(state);

  const double tol =
      config.alpha_scaled_tol ? config.grad_tol * std::min(1.0, alpha)
                              : config.grad_tol;
  NodeVector grad;
  int done = 0;
  for (int k = first_k;; ++k) {
    grad = dual_gradient(graph, state, f, alpha);
    report.gradient_norm = Norm2(grad);
    if (report.gradient_norm <= tol) {
      report.converged = true;
      break;
    }
    if (done >= budget) break;
    ++done;

    const NodeVector s = policy.direction(state, grad, k);
    const SolverConfig::StepRule rule =
        policy.newton_step(k) ? config.newton_rule : config.gradient_rule;
    const LineSearchResult ls =
        rule == SolverConfig::StepRule::kExact
            ? exact_line_search(graph, state, f, alpha, s)
            : line_search(graph, state, f, alpha, s, config.hit_tie_rel_tol);
    if (ls.rule == LineSearchResult::Rule::kUnbounded) {
      throw Infeasible(
          "dual objective is unbounded along the search direction; no "
          "feasible flow exists for this mass vector");
    }
    if (!(ls.t > 0.0)) {
      ++report.zero_step_events;
    } else {
      DualPotential p = state.p;
      for (std::size_t v = 0; v < p.size(); ++v) p[v] += ls.t * s[v];
      const ActiveMask old_mask = std::move(state.mask);
      state = make_dual_state(graph, std::move(p));
      for (std::size_t e = 0; e < old_mask.size(); ++e) {
        report.active_set_changes += old_mask[e] != state.mask[e];
      }
      policy.after_step(state);
    }
    if (config.record_trace) {
      report.dual_trace.push_back(dual_objective(state, f, alpha));
    }
  }
  report.iterations = done;
  report.refactorizations = policy.refactorizations();
  report.flow = recover_primal(state, alpha);
  report.primal_value = primal_objective(report.flow, graph.costs(), alpha);
  report.dual_value = dual_objective(state, f, alpha) / alpha;
  report.p = std::move(state.p);
  report.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return report;
}

}  // namespace internal

SolveReport solve_from(const Graph& graph, std::span<const double> f,
                       const SolverConfig& config, DualPotential p0) {
  config.validate();
  validate_mass(graph, f);
  std::vector<double> stages;
  if (config.continuation_start > config.alpha) {
    for (double a = config.continuation_start;
         a > config.alpha * (1.0 + 1e-12); a /= config.continuation_factor) {
      stages.push_back(a);
    }
  }
  stages.push_back(config.alpha);

  SolveReport total;
  int budget = config.max_iter;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const bool last = i + 1 == stages.size();
    SolverConfig stage = config;
    stage.alpha = stages[i];
    if (!last) {
      stage.grad_tol =
          std::max(config.grad_tol, config.continuation_rel_tol * stages[i]);
      stage.alpha_scaled_tol = false;
    }
    HessUpdatePolicy policy(graph, config.refactor_period);
    // Later stages open with a pseudo-Newton step: the active set carries
    // over and only the slack scale changes.
    SolveReport r = internal::run_dual_ascent(graph, f, stage, std::move(p0),
                                              policy, "hessupdate",
                                              i == 0 ? 1 : 2, budget);
    budget -= r.iterations;
    p0 = r.p;
    r.iterations += total.iterations;
    r.active_set_changes += total.active_set_changes;
    r.refactorizations += total.refactorizations;
    r.zero_step_events += total.zero_step_events;
    r.wall_time += total.wall_time;
    r.dual_trace.insert(r.dual_trace.begin(), total.dual_trace.begin(),
                        total.dual_trace.end());
    r.stages = static_cast<int>(i) + 1;
    total = std::move(r);
  }
  return total;
}

SolveReport solve(const Graph& graph, std::span<const double> f,
                  const SolverConfig& config) {
  return solve_from(graph, f, config,
                    initial_potential(graph.node_count(), config.seed));
}

}  // namespace qrot
