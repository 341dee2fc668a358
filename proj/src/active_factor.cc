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

#include "qrot/active_factor.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qrot {

ActiveFactor::ActiveFactor(const Graph& graph, ActiveMask mask,
                           int refactor_period)
    : graph_(&graph), refactor_period_(refactor_period),
      mask_(std::move(mask)) {
  RequireSize(mask_.size(), graph.edge_count(), "active mask");
  if (refactor_period_ < 1) throw InvalidInput("refactor_period must be >= 1");
  labeling_ = components(graph, mask_);
  factor_ = factorize(graph, mask_, labeling_);
}

void ActiveFactor::refactorize() {
  labeling_ = components(*graph_, mask_);
  factor_ = factorize(*graph_, mask_, labeling_);
  ++refactorizations_;
}

NodeVector ActiveFactor::pinv_apply(std::span<const double> b) const {
  return qrot::pinv_apply(factor_, labeling_, b);
}

NodeVector ActiveFactor::indicator(const std::vector<int>& members) const {
  NodeVector x(graph_->node_count(), 0.0);
  const double w = 1.0 / std::sqrt(static_cast<double>(members.size()));
  for (int v : members) x[v] = w;
  return x;
}

NodeVector ActiveFactor::edge_vector(int e) const {
  NodeVector x(graph_->node_count(), 0.0);
  x[graph_->edge(e).tail] = -1.0;
  x[graph_->edge(e).head] = 1.0;
  return x;
}

// Keeps component ids compact by moving the last component into slot c.
void ActiveFactor::remove_component(int c) {
  const int last = labeling_.count() - 1;
  if (c != last) {
    labeling_.members[c] = std::move(labeling_.members[last]);
    for (int v : labeling_.members[c]) labeling_.label[v] = c;
  }
  labeling_.members.pop_back();
}

void ActiveFactor::activate(int e) {
  mask_[e] = 1;
  events_.push_back({FactorEvent::Kind::kAddEdge, e, edge_vector(e)});
  const int a = labeling_.label[graph_->edge(e).tail];
  const int b = labeling_.label[graph_->edge(e).head];
  if (a == b) return;
  const NodeVector va = indicator(labeling_.members[a]);
  const NodeVector vb = indicator(labeling_.members[b]);
  // Merge the smaller component into the larger one.
  const int keep = labeling_.size(a) >= labeling_.size(b) ? a : b;
  const int gone = keep == a ? b : a;
  auto& dst = labeling_.members[keep];
  for (int v : labeling_.members[gone]) labeling_.label[v] = keep;
  dst.insert(dst.end(), labeling_.members[gone].begin(),
             labeling_.members[gone].end());
  std::sort(dst.begin(), dst.end());
  events_.push_back({FactorEvent::Kind::kAddComponent, -1, indicator(dst)});
  events_.push_back({FactorEvent::Kind::kRemoveComponent, -1, va});
  events_.push_back({FactorEvent::Kind::kRemoveComponent, -1, vb});
  labeling_.members[gone].clear();
  remove_component(gone);
}

void ActiveFactor::deactivate(int e) {
  mask_[e] = 0;
  const int u = graph_->edge(e).tail;
  const int w = graph_->edge(e).head;
  const int c = labeling_.label[u];

  // Flood fill from u inside the old component.
  std::vector<int> seen_nodes{u};
  std::vector<char> seen(graph_->node_count(), 0);
  seen[u] = 1;
  bool reached = false;
  for (std::size_t i = 0; i < seen_nodes.size() && !reached; ++i) {
    const int x = seen_nodes[i];
    for (int f : graph_->incident_edges(x)) {
      if (!mask_[f]) continue;
      const int y = graph_->other_end(f, x);
      if (seen[y]) continue;
      if (y == w) {
        reached = true;
        break;
      }
      seen[y] = 1;
      seen_nodes.push_back(y);
    }
  }

  if (!reached) {
    const NodeVector whole = indicator(labeling_.members[c]);
    std::sort(seen_nodes.begin(), seen_nodes.end());
    std::vector<int> rest;
    rest.reserve(labeling_.members[c].size() - seen_nodes.size());
    for (int v : labeling_.members[c]) {
      if (!seen[v]) rest.push_back(v);
    }
    labeling_.members[c] = std::move(rest);
    const int split = labeling_.count();
    for (int v : seen_nodes) labeling_.label[v] = split;
    labeling_.members.push_back(std::move(seen_nodes));
    events_.push_back({FactorEvent::Kind::kAddComponent, -1,
                       indicator(labeling_.members[c])});
    events_.push_back({FactorEvent::Kind::kAddComponent, -1,
                       indicator(labeling_.members[split])});
    events_.push_back({FactorEvent::Kind::kRemoveComponent, -1, whole});
  }
  events_.push_back({FactorEvent::Kind::kRemoveEdge, e, edge_vector(e)});
}

TransitionStats ActiveFactor::transition(const ActiveMask& new_mask) {
  RequireSize(new_mask.size(), mask_.size(), "active mask");
  events_.clear();
  TransitionStats stats;
  std::vector<int> on;
  std::vector<int> off;
  for (std::size_t e = 0; e < new_mask.size(); ++e) {
    if (new_mask[e] && !mask_[e]) on.push_back(static_cast<int>(e));
    if (!new_mask[e] && mask_[e]) off.push_back(static_cast<int>(e));
  }
  stats.activated = static_cast<int>(on.size());
  stats.deactivated = static_cast<int>(off.size());
  if (on.empty() && off.empty()) return stats;

  for (int e : on) activate(e);
  for (int e : off) deactivate(e);
  stats.events = static_cast<int>(events_.size());

  if (factor_.update_count() + stats.events > refactor_period_) {
    refactorize();
    stats.refactorized = true;
    return stats;
  }
  for (const FactorEvent& ev : events_) {
    if (ev.is_update()) factor_.rank1_update(ev.vector);
  }
  for (const FactorEvent& ev : events_) {
    if (ev.is_update()) continue;
    if (!factor_.rank1_downdate(ev.vector)) {
      stats.downdate_failed = true;
      refactorize();
      stats.refactorized = true;
      return stats;
    }
  }
  return stats;
}

}  // namespace qrot
