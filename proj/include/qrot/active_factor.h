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

#ifndef QROT_ACTIVE_FACTOR_H_
#define QROT_ACTIVE_FACTOR_H_

#include <span>
#include <vector>

#include "qrot/cholesky.h"
#include "qrot/common.h"
#include "qrot/graph.h"

namespace qrot {

// One rank-1 change to L + N N^T.
struct FactorEvent {
  enum class Kind { kAddEdge, kRemoveEdge, kAddComponent, kRemoveComponent };

  Kind kind;
  // Edge for edge events, -1 otherwise.
  int edge = -1;
  // x with L + N N^T changing by +x x^T (add) or -x x^T (remove).
  NodeVector vector;

  bool is_update() const {
    return kind == Kind::kAddEdge || kind == Kind::kAddComponent;
  }
};

struct TransitionStats {
  int activated = 0;
  int deactivated = 0;
  int events = 0;
  bool refactorized = false;
  bool downdate_failed = false;
};

// Tracks the active mask, its component labeling and the Cholesky factor
// of L + N N^T across active-set changes.
//
// A transition applies every update before any downdate so the factor
// stays full rank. The factor is rebuilt from scratch when a downdate
// fails, or when the accumulated rank-1 count would exceed
// `refactor_period`.
class ActiveFactor {
 public:
  ActiveFactor(const Graph& graph, ActiveMask mask, int refactor_period = 500);

  const ActiveMask& mask() const { return mask_; }
  const ComponentLabeling& labeling() const { return labeling_; }
  const CholeskyFactor& factor() const { return factor_; }
  int refactorizations() const { return refactorizations_; }

  // Moves to `new_mask`, emitting and applying the rank-1 events.
  TransitionStats transition(const ActiveMask& new_mask);

  // Events emitted by the most recent transition, in emission order.
  const std::vector<FactorEvent>& last_events() const { return events_; }

  NodeVector pinv_apply(std::span<const double> b) const;

  // Rebuilds labeling and factor from the current mask.
  void refactorize();

 private:
  void activate(int e);
  void deactivate(int e);
  NodeVector indicator(const std::vector<int>& members) const;
  NodeVector edge_vector(int e) const;
  void remove_component(int c);

  const Graph* graph_;
  int refactor_period_;
  ActiveMask mask_;
  ComponentLabeling labeling_;
  CholeskyFactor factor_;
  std::vector<FactorEvent> events_;
  int refactorizations_ = 0;
};

}  // namespace qrot

#endif  // QROT_ACTIVE_FACTOR_H_
