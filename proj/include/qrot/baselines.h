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

#ifndef QROT_BASELINES_H_
#define QROT_BASELINES_H_

#include <span>

#include "qrot/common.h"
#include "qrot/graph.h"
#include "qrot/solver.h"

namespace qrot {

// Plain gradient ascent with the first-kink line search
// ("graddescent").
SolveReport gradient_ascent(const Graph& graph, std::span<const double> f,
                            const SolverConfig& config);

// Alternates gradient steps with steps preconditioned by the pseudoinverse
// of the full-graph Laplacian, factored once up front ("precondgrad").
SolveReport precond_gradient(const Graph& graph, std::span<const double> f,
                             const SolverConfig& config);

struct OracleResult {
  double optimal_value = 0.0;
  FlowVector flow;
  // LP duals: c_e - (p_head - p_tail) >= 0, with equality where flow > 0.
  NodeVector node_potentials;
  int augmentations = 0;
};

// Exact optimum of the unregularized min-cost flow by successive shortest
// augmenting paths with node potentials (Bellman-Ford start, then
// reduced-cost Dijkstra). Throws Infeasible if some demand is unreachable.
OracleResult lp_oracle(const Graph& graph, std::span<const double> f);

struct CertificateCheck {
  bool feasible = false;
  bool reduced_costs_nonnegative = false;
  bool complementary_slackness = false;
  double max_violation = 0.0;
  bool ok() const {
    return feasible && reduced_costs_nonnegative && complementary_slackness;
  }
};

// Verifies an oracle result's optimality certificate within `tol`.
CertificateCheck check_certificate(const Graph& graph,
                                   std::span<const double> f,
                                   const OracleResult& result,
                                   double tol = 1e-9);

}  // namespace qrot

#endif  // QROT_BASELINES_H_
