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

#ifndef QROT_DECOMPOSITION_H_
#define QROT_DECOMPOSITION_H_

#include <span>
#include <string>
#include <vector>

#include "qrot/common.h"
#include "qrot/graph.h"

namespace qrot {

// Sequence of distinct nodes joined by graph edges. For a cycle the first
// node is not repeated at the end; edges.size() == nodes.size() and the
// last edge closes the loop.
struct DirectedPath {
  std::vector<int> nodes;
  std::vector<int> edges;

  int source() const { return nodes.front(); }
  int target() const { return nodes.back(); }
  int length() const { return static_cast<int>(edges.size()); }
  friend bool operator==(const DirectedPath&, const DirectedPath&) = default;
};

struct PathFlow {
  DirectedPath path;
  double flow = 0.0;
};

struct PathDecomposition {
  std::vector<PathFlow> paths;
  std::vector<PathFlow> cycles;
};

// Builds the path from a node sequence; throws InvalidInput when a
// consecutive pair is not an edge or a node repeats.
DirectedPath make_path(const Graph& graph, std::vector<int> nodes);

// Greedy peel of a nonnegative flow with D^T J = f (checked to 1e-9): walk
// from a source along the outgoing edge of largest remaining flow (ties to
// the lower edge index) until a node with unmet demand, subtract the
// bottleneck, repeat; closed walks and leftover circulation become cycles.
// Paths with the same node sequence are merged.
PathDecomposition decompose(const Graph& graph, std::span<const double> flow,
                            std::span<const double> f);
// Decomposes against the flow's own divergence.
PathDecomposition decompose(const Graph& graph, std::span<const double> flow);

FlowVector reconstruct(const Graph& graph, const PathDecomposition& decomp);

struct BoundsReport {
  bool ok = true;
  double max_path_excess = 0.0;  // max over paths of flow + f_source
  double max_edge_excess = 0.0;  // max over edges of J_e - total supply
  std::vector<std::string> violations;
};

// Path flow <= -f at its source and J_e <= total source mass, within
// `slack`. Cycles in the decomposition are reported as a violation.
BoundsReport check_bounds(const Graph& graph, const PathDecomposition& decomp,
                          std::span<const double> f, double slack = 1e-9);

// S(r, r') = number of edges shared by paths r and r'.
std::vector<std::vector<int>> path_overlap(const PathDecomposition& decomp);

// c_path^T Jhat + alpha/2 Jhat^T S Jhat over the path flows. Throws
// InvalidInput if the decomposition has cycles.
double path_objective(const Graph& graph, const PathDecomposition& decomp,
                      double alpha);

// Jhat_1 = Jhat_2 + sum_k epsilon_k Rhat_k over a shared path universe,
// with Rhat_k = (indicator of minus_paths) - (indicator of plus_paths).
// minus_paths carry more flow in the first decomposition, plus_paths more
// in the second, measured against the running second flow.
struct DivergenceFreeDiff {
  struct Term {
    double epsilon = 0.0;
    std::vector<int> minus_paths;
    std::vector<int> plus_paths;
  };

  std::vector<DirectedPath> universe;
  std::vector<double> flow1;
  std::vector<double> flow2;
  std::vector<Term> terms;

  // Rhat_k as a vector over the universe.
  std::vector<double> term_path_vector(int k) const;
  // R_k as an arc flow.
  EdgeVector term_arc_flow(const Graph& graph, int k) const;
  // Jhat_1 - Jhat_2 - sum_k epsilon_k Rhat_k.
  std::vector<double> residual() const;
};

// Builds the terms one at a time: start from a path where the flows differ,
// alternately extend through its source and target with paths of opposite
// discrepancy until a source or target repeats, close the alternating
// loop, step by the smallest discrepancy on it, and repeat until the flows
// agree. Flows differing by at most `tol` count as equal. Both inputs must
// have divergence f within div_tol. Throws Error if the alternating chain
// cannot be closed, which only happens for inconsistent inputs.
DivergenceFreeDiff divergence_free_diff(const Graph& graph,
                                        const PathDecomposition& first,
                                        const PathDecomposition& second,
                                        std::span<const double> f,
                                        double tol = 1e-10,
                                        double div_tol = 1e-9);

}  // namespace qrot

#endif  // QROT_DECOMPOSITION_H_
