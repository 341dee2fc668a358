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

#include "qrot/graph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <unordered_set>

namespace qrot {
namespace {

std::uint64_t PairKey(int tail, int head) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(tail)) << 32) |
         static_cast<std::uint32_t>(head);
}

}  // namespace

Graph::Graph(int node_count, std::vector<Edge> edges,
             std::vector<double> costs)
    : node_count_(node_count), edges_(std::move(edges)),
      costs_(std::move(costs)) {
  if (node_count_ < 1) throw InvalidInput("graph needs at least one node");
  RequireSize(costs_.size(), edges_.size(), "edge costs");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    const std::string where = "edge " + std::to_string(e);
    if (ed.tail < 0 || ed.tail >= node_count_ || ed.head < 0 ||
        ed.head >= node_count_) {
      throw InvalidInput(where + ": node index out of range");
    }
    if (ed.tail == ed.head) throw InvalidInput(where + ": self-loop");
    if (!seen.insert(PairKey(ed.tail, ed.head)).second) {
      throw InvalidInput(where + ": duplicate directed edge (" +
                         std::to_string(ed.tail) + ", " +
                         std::to_string(ed.head) + ")");
    }
    if (!std::isfinite(costs_[e]) || costs_[e] < 0.0) {
      throw InvalidInput(where + ": cost must be finite and nonnegative");
    }
  }

  offsets_.assign(node_count_ + 1, 0);
  for (const Edge& ed : edges_) {
    ++offsets_[ed.tail + 1];
    ++offsets_[ed.head + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incident_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int e = 0; e < edge_count(); ++e) {
    incident_[fill[edges_[e].tail]++] = e;
    incident_[fill[edges_[e].head]++] = e;
  }

  ActiveMask all(edges_.size(), 1);
  if (components(*this, all).count() != 1) {
    throw InvalidInput("graph is disconnected");
  }
}

int Graph::find_edge(int tail, int head) const {
  for (int e : incident_edges(tail)) {
    if (edges_[e].tail == tail && edges_[e].head == head) return e;
  }
  return -1;
}

Graph Graph::with_costs(std::vector<double> costs) const {
  return Graph(node_count_, edges_, std::move(costs));
}

std::vector<int> ComponentLabeling::sizes() const {
  std::vector<int> out(members.size());
  for (std::size_t c = 0; c < members.size(); ++c) {
    out[c] = static_cast<int>(members[c].size());
  }
  return out;
}

NodeVector ComponentLabeling::null_basis_column(int c) const {
  NodeVector col(label.size(), 0.0);
  const double w = 1.0 / std::sqrt(static_cast<double>(members[c].size()));
  for (int v : members[c]) col[v] = w;
  return col;
}

std::vector<double> ComponentLabeling::null_coefficients(
    std::span<const double> b) const {
  RequireSize(b.size(), label.size(), "null_coefficients");
  std::vector<double> out(members.size(), 0.0);
  for (std::size_t c = 0; c < members.size(); ++c) {
    double s = 0.0;
    for (int v : members[c]) s += b[v];
    out[c] = s / std::sqrt(static_cast<double>(members[c].size()));
  }
  return out;
}

NodeVector ComponentLabeling::null_projection(std::span<const double> b) const {
  RequireSize(b.size(), label.size(), "null_projection");
  NodeVector out(b.size(), 0.0);
  for (const auto& comp : members) {
    double s = 0.0;
    for (int v : comp) s += b[v];
    const double mean = s / static_cast<double>(comp.size());
    for (int v : comp) out[v] = mean;
  }
  return out;
}

NodeVector ComponentLabeling::project(std::span<const double> b) const {
  NodeVector out = null_projection(b);
  for (std::size_t v = 0; v < b.size(); ++v) out[v] = b[v] - out[v];
  return out;
}

EdgeVector incidence_apply(const Graph& graph, std::span<const double> p) {
  RequireSize(p.size(), graph.node_count(), "potential");
  EdgeVector out(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    out[e] = p[ed.head] - p[ed.tail];
  }
  return out;
}

NodeVector divergence(const Graph& graph, std::span<const double> flow) {
  RequireSize(flow.size(), graph.edge_count(), "flow");
  NodeVector out(graph.node_count(), 0.0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    out[ed.head] += flow[e];
    out[ed.tail] -= flow[e];
  }
  return out;
}

ActiveMask active_set_from_slack(std::span<const double> slack) {
  ActiveMask mask(slack.size());
  for (std::size_t e = 0; e < slack.size(); ++e) mask[e] = slack[e] > 0.0;
  return mask;
}

ActiveMask active_set(const Graph& graph, std::span<const double> p) {
  EdgeVector slack = incidence_apply(graph, p);
  for (int e = 0; e < graph.edge_count(); ++e) slack[e] -= graph.cost(e);
  return active_set_from_slack(slack);
}

ComponentLabeling components(const Graph& graph, const ActiveMask& mask) {
  RequireSize(mask.size(), graph.edge_count(), "active mask");
  const int n = graph.node_count();
  ComponentLabeling out;
  out.label.assign(n, -1);
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (out.label[root] >= 0) continue;
    const int id = out.count();
    out.members.emplace_back();
    out.label[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      out.members[id].push_back(v);
      for (int e : graph.incident_edges(v)) {
        if (!mask[e]) continue;
        const int w = graph.other_end(e, v);
        if (out.label[w] < 0) {
          out.label[w] = id;
          stack.push_back(w);
        }
      }
    }
    std::sort(out.members[id].begin(), out.members[id].end());
  }
  return out;
}

NodeVector active_laplacian_apply(const Graph& graph, const ActiveMask& mask,
                                  std::span<const double> x) {
  RequireSize(x.size(), graph.node_count(), "laplacian input");
  RequireSize(mask.size(), graph.edge_count(), "active mask");
  NodeVector out(graph.node_count(), 0.0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (!mask[e]) continue;
    const Edge& ed = graph.edge(e);
    const double d = x[ed.head] - x[ed.tail];
    out[ed.head] += d;
    out[ed.tail] -= d;
  }
  return out;
}

double active_laplacian_form(const Graph& graph, const ActiveMask& mask,
                             std::span<const double> x) {
  RequireSize(x.size(), graph.node_count(), "laplacian input");
  double s = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (!mask[e]) continue;
    const double d = x[graph.edge(e).head] - x[graph.edge(e).tail];
    s += d * d;
  }
  return s;
}

int active_count(const ActiveMask& mask) {
  return static_cast<int>(std::count(mask.begin(), mask.end(), 1));
}

}  // namespace qrot
