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

#ifndef QROT_GRAPH_H_
#define QROT_GRAPH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "qrot/common.h"

namespace qrot {

struct Edge {
  int tail = 0;
  int head = 0;
};

// Directed graph with nonnegative per-edge costs. The edge index is the
// identity used by flows, masks and factor events.
//
// Construction enforces: no self-loops, no duplicate (tail, head) pair,
// costs >= 0 and finite, and a connected underlying undirected graph.
// Opposite edges (v, w) and (w, v) are two independent edges.
class Graph {
 public:
  Graph(int node_count, std::vector<Edge> edges, std::vector<double> costs);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  double cost(int e) const { return costs_[e]; }
  std::span<const double> costs() const { return costs_; }

  // Edges touching v in either direction, ascending edge index.
  std::span<const int> incident_edges(int v) const {
    return {incident_.data() + offsets_[v],
            incident_.data() + offsets_[v + 1]};
  }
  int other_end(int e, int v) const {
    return edges_[e].tail == v ? edges_[e].head : edges_[e].tail;
  }

  // Index of edge (tail, head) or -1.
  int find_edge(int tail, int head) const;

  Graph with_costs(std::vector<double> costs) const;

 private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<double> costs_;
  std::vector<int> offsets_;
  std::vector<int> incident_;
};

// Per-edge boolean; 1 marks an edge of the active subgraph.
using ActiveMask = std::vector<std::uint8_t>;

// Connected components of (V, active edges) with component ids 0..count-1.
// The null basis of the active Laplacian is the set of normalized
// component indicators; it is kept implicit and materialized on demand.
struct ComponentLabeling {
  std::vector<int> label;
  std::vector<std::vector<int>> members;

  int count() const { return static_cast<int>(members.size()); }
  int size(int c) const { return static_cast<int>(members[c].size()); }
  std::vector<int> sizes() const;

  // Column c of N: 1/sqrt(|c|) on members of c, 0 elsewhere.
  NodeVector null_basis_column(int c) const;
  // N N^T b: replaces each entry by its component mean.
  NodeVector null_projection(std::span<const double> b) const;
  // P b = (I - N N^T) b.
  NodeVector project(std::span<const double> b) const;
  // N^T b, one entry per component.
  std::vector<double> null_coefficients(std::span<const double> b) const;
};

// (Dp)_e = p_head - p_tail.
EdgeVector incidence_apply(const Graph& graph, std::span<const double> p);

// D^T J: inflow minus outflow at each node.
NodeVector divergence(const Graph& graph, std::span<const double> flow);

// Edges with (Dp - c)_e > 0 strictly.
ActiveMask active_set(const Graph& graph, std::span<const double> p);
ActiveMask active_set_from_slack(std::span<const double> slack);

ComponentLabeling components(const Graph& graph, const ActiveMask& mask);

// D^T M D x without forming the Laplacian.
NodeVector active_laplacian_apply(const Graph& graph, const ActiveMask& mask,
                                  std::span<const double> x);

// x^T D^T M D x = sum over active edges of (x_head - x_tail)^2.
double active_laplacian_form(const Graph& graph, const ActiveMask& mask,
                             std::span<const double> x);

int active_count(const ActiveMask& mask);

}  // namespace qrot

#endif  // QROT_GRAPH_H_
