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

#ifndef QROT_SRC_DUAL_ASCENT_H_
#define QROT_SRC_DUAL_ASCENT_H_

#include <span>
#include <string>

#include "qrot/solver.h"

namespace qrot::internal {

// Chooses search directions for the shared ascent loop. The loop owns the
// line search, the stopping rule and report assembly so that every solver
// is measured with identical iteration accounting.
class DirectionPolicy {
 public:
  virtual ~DirectionPolicy() = default;
  virtual void start(const DualState& state) = 0;
  virtual NodeVector direction(const DualState& state,
                               const NodeVector& gradient, int k) = 0;
  // Called after p moved; `state` already carries the recomputed mask.
  virtual void after_step(const DualState& /*state*/) {}
  // Whether step k uses a preconditioned direction (and the Newton line
  // search rule).
  virtual bool newton_step(int /*k*/) const { return false; }
  virtual int refactorizations() const { return 0; }
};

// Runs at most `budget` iterations numbered first_k, first_k + 1, ...
// Inputs are assumed validated.
SolveReport run_dual_ascent(const Graph& graph, std::span<const double> f,
                            const SolverConfig& config, DualPotential p0,
                            DirectionPolicy& policy, std::string name,
                            int first_k, int budget);

// Pseudo-Newton direction from a gradient, with the gradient fallback
// described on search_direction().
NodeVector pseudo_newton_or_gradient(const CholeskyFactor& factor,
                                     const ComponentLabeling& labeling,
                                     const NodeVector& gradient);

}  // namespace qrot::internal

#endif  // QROT_SRC_DUAL_ASCENT_H_
