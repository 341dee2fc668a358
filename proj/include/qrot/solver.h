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

#ifndef QROT_SOLVER_H_
#define QROT_SOLVER_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qrot/active_factor.h"
#include "qrot/common.h"
#include "qrot/graph.h"

namespace qrot {

struct SolverConfig {
  // kFirstKink stops at min(parabola peak, first hitting time). kExact
  // keeps walking the piecewise quadratic through kinks to its maximum.
  enum class StepRule { kFirstKink, kExact };

  double alpha = 1.0;
  // Stop at |grad g| <= grad_tol, or at |grad g| <= grad_tol * min(1, alpha)
  // when alpha_scaled_tol is set. grad g = alpha (f - D^T J), so the scaled
  // form also bounds the divergence residual of the recovered flow by
  // grad_tol.
  double grad_tol = 1e-8;
  bool alpha_scaled_tol = true;
  int max_iter = 3000;
  int refactor_period = 500;
  std::uint64_t seed = 0;
  // Hitting times within this relative distance of the minimum count as
  // simultaneous flips.
  double hit_tie_rel_tol = 1e-12;
  // Record the dual objective after every iteration in the report.
  bool record_trace = false;
  StepRule gradient_rule = StepRule::kFirstKink;
  StepRule newton_rule = StepRule::kExact;
  // solve() only: when alpha < continuation_start, first solve at
  // continuation_start, continuation_start / continuation_factor, ... and
  // warm-start each stage from the last, stopping intermediate stages at
  // continuation_rel_tol * stage alpha. Iterations count across stages.
  double continuation_start = 1.0;
  double continuation_factor = 4.0;
  double continuation_rel_tol = 1e-6;

  void validate() const;
};

// Dual iterate: potential p, slack v = Dp - c and mask of v > 0.
struct DualState {
  DualPotential p;
  EdgeVector v;
  ActiveMask mask;
};

DualState make_dual_state(const Graph& graph, DualPotential p);

// Full state of the active-set Newton solver.
struct SolverState {
  DualState dual;
  ActiveFactor active;
  int iteration = 0;
};

SolverState make_solver_state(const Graph& graph, DualPotential p,
                              int refactor_period = 500);

struct SolveReport {
  std::string solver;
  DualPotential p;
  FlowVector flow;
  // (1/alpha) * g(p), directly comparable with primal_value.
  double dual_value = 0.0;
  double primal_value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
  // Total number of edge flips across the run.
  int active_set_changes = 0;
  int refactorizations = 0;
  // Line searches that produced no movement.
  int zero_step_events = 0;
  // Continuation stages run, including the final one.
  int stages = 1;
  double alpha = 0.0;
  std::vector<double> dual_trace;
};

// g(p) = alpha f^T p - 1/2 sum_{e active} v_e^2.
double dual_objective(const DualState& state, std::span<const double> f,
                      double alpha);

// alpha f - D^T M v.
NodeVector dual_gradient(const Graph& graph, const DualState& state,
                         std::span<const double> f, double alpha);

// Gradient on odd k, pseudo-Newton L^+ grad on even k; shifted to sum to
// zero. A pseudo-Newton direction with no ascent (grad in the null space of
// L) falls back to the gradient.
NodeVector search_direction(const Graph& graph, const SolverState& state,
                            std::span<const double> f, double alpha, int k);

struct LineSearchResult {
  enum class Rule { kQuadratic, kActiveSet, kUnbounded, kNoAscent };

  double t = 0.0;
  Rule rule = Rule::kNoAscent;
  double t_quadratic = std::numeric_limits<double>::infinity();
  double t_active_set = std::numeric_limits<double>::infinity();
  // Edges whose hitting time ties the minimum.
  std::vector<int> hits;
};

// Exact search along s on the current quadratic piece: the parabola
// minimizer, clipped at the first positive hitting time -v_e / (Ds)_e.
//
// Edges sitting on their kink (|v_e| within rounding of 0) belong to the
// piece entered for t > 0: active when (Ds)_e > 0, inactive otherwise, and
// they contribute no hitting time.
LineSearchResult line_search(const Graph& graph, const DualState& state,
                             std::span<const double> f, double alpha,
                             std::span<const double> s,
                             double hit_tie_rel_tol = 1e-12);

// Maximizer of g(p + t s) over t >= 0 on the whole piecewise quadratic.
// t_quadratic and t_active_set describe the first piece as above; hits
// lists the kinks crossed on the way.
LineSearchResult exact_line_search(const Graph& graph, const DualState& state,
                                   std::span<const double> f, double alpha,
                                   std::span<const double> s);

// Replaces p, recomputes v and the mask, and pushes the mask change
// through the active factor.
TransitionStats apply_transition(const Graph& graph, SolverState& state,
                                 DualPotential p_new);

// J = max(v, 0) / alpha.
FlowVector recover_primal(const DualState& state, double alpha);

// c^T J + alpha/2 |J|^2. Throws InvalidInput on a negative entry.
double primal_objective(std::span<const double> flow,
                        std::span<const double> costs, double alpha);

// Random p0: i.i.d. uniform [0, 1) from `seed`, mean-centered.
DualPotential initial_potential(int n, std::uint64_t seed);

// Active-set pseudo-Newton dual ascent ("hessupdate"). Throws Infeasible
// when the dual is unbounded along a search direction.
SolveReport solve(const Graph& graph, std::span<const double> f,
                  const SolverConfig& config);

// Same, starting from a given potential.
SolveReport solve_from(const Graph& graph, std::span<const double> f,
                       const SolverConfig& config, DualPotential p0);

// Checks |sum f| <= 1e-9 and the dimension; throws InvalidInput.
void validate_mass(const Graph& graph, std::span<const double> f);

}  // namespace qrot

#endif  // QROT_SOLVER_H_
