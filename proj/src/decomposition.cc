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

#include "qrot/decomposition.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace qrot {
namespace {

// Finds the outgoing edge of `v` with the largest remaining flow above
// `tol`, ties to the lowest edge index. Returns -1 if none.
int HeaviestOutEdge(const Graph& graph, std::span<const double> rest, int v,
                    double tol) {
  int best = -1;
  for (int e : graph.incident_edges(v)) {
    if (graph.edge(e).tail != v || rest[e] <= tol) continue;
    if (best < 0 || rest[e] > rest[best]) best = e;
  }
  return best;
}

class Peeler {
 public:
  Peeler(const Graph& graph, std::span<const double> flow, double tol)
      : graph_(graph), rest_(flow.begin(), flow.end()), tol_(tol),
        position_(graph.node_count(), -1) {}

  // Walks from `start` until `stop(node)` holds at a node other than
  // `start`. Closed walks found on the way are peeled as cycles. Returns
  // false if the walk got stuck.
  template <typename Stop>
  bool walk(int start, Stop stop, std::vector<int>& nodes,
            std::vector<int>& edges) {
    nodes.assign(1, start);
    edges.clear();
    position_[start] = 0;
    bool ok = true;
    for (;;) {
      const int cur = nodes.back();
      if (nodes.size() > 1 && stop(cur)) break;
      const int e = HeaviestOutEdge(graph_, rest_, cur, tol_);
      if (e < 0) {
        ok = false;
        break;
      }
      const int next = graph_.edge(e).head;
      if (position_[next] >= 0) {
        peel_cycle(nodes, edges, position_[next], e);
        continue;
      }
      position_[next] = static_cast<int>(nodes.size());
      nodes.push_back(next);
      edges.push_back(e);
    }
    for (int v : nodes) position_[v] = -1;
    return ok;
  }

  double bottleneck(const std::vector<int>& edges) const {
    double b = std::numeric_limits<double>::infinity();
    for (int e : edges) b = std::min(b, rest_[e]);
    return b;
  }

  void subtract(const std::vector<int>& edges, double amount) {
    for (int e : edges) rest_[e] = rest_[e] == amount ? 0.0 : rest_[e] - amount;
  }

  std::vector<PathFlow>& cycles() { return cycles_; }
  std::span<const double> rest() const { return rest_; }

 private:
  void peel_cycle(std::vector<int>& nodes, std::vector<int>& edges, int from,
                  int closing) {
    PathFlow cyc;
    cyc.path.nodes.assign(nodes.begin() + from, nodes.end());
    cyc.path.edges.assign(edges.begin() + from, edges.end());
    cyc.path.edges.push_back(closing);
    cyc.flow = bottleneck(cyc.path.edges);
    subtract(cyc.path.edges, cyc.flow);
    cycles_.push_back(std::move(cyc));
    for (std::size_t i = from + 1; i < nodes.size(); ++i) position_[nodes[i]] = -1;
    nodes.resize(from + 1);
    edges.resize(from);
  }

  const Graph& graph_;
  std::vector<double> rest_;
  double tol_;
  std::vector<int> position_;
  std::vector<PathFlow> cycles_;
};

void MergeSameNodes(std::vector<PathFlow>& items) {
  std::map<std::vector<int>, std::size_t> index;
  std::vector<PathFlow> merged;
  for (PathFlow& pf : items) {
    auto [it, fresh] = index.emplace(pf.path.nodes, merged.size());
    if (fresh) {
      merged.push_back(std::move(pf));
    } else {
      merged[it->second].flow += pf.flow;
    }
  }
  items = std::move(merged);
}

}  // namespace

DirectedPath make_path(const Graph& graph, std::vector<int> nodes) {
  if (nodes.empty()) throw InvalidInput("path needs at least one node");
  DirectedPath path;
  std::vector<char> seen(graph.node_count(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int v = nodes[i];
    if (v < 0 || v >= graph.node_count()) {
      throw InvalidInput("path node out of range");
    }
    if (seen[v]) throw InvalidInput("path repeats node " + std::to_string(v));
    seen[v] = 1;
    if (i == 0) continue;
    const int e = graph.find_edge(nodes[i - 1], v);
    if (e < 0) {
      throw InvalidInput("no edge (" + std::to_string(nodes[i - 1]) + ", " +
                         std::to_string(v) + ")");
    }
    path.edges.push_back(e);
  }
  path.nodes = std::move(nodes);
  return path;
}

PathDecomposition decompose(const Graph& graph, std::span<const double> flow,
                            std::span<const double> f) {
  RequireSize(flow.size(), graph.edge_count(), "flow");
  RequireSize(f.size(), graph.node_count(), "mass vector");
  double scale = 1.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (flow[e] < 0.0) {
      throw InvalidInput("negative flow on edge " + std::to_string(e));
    }
    scale = std::max(scale, flow[e]);
  }
  const NodeVector div = divergence(graph, flow);
  for (int v = 0; v < graph.node_count(); ++v) {
    if (std::abs(div[v] - f[v]) > 1e-9) {
      throw InvalidInput("flow divergence does not match f at node " +
                         std::to_string(v));
    }
  }
  // Residual demand taken from the flow itself so that peeled amounts
  // account for the flow exactly.
  NodeVector demand = div;
  const double tol = 1e-14 * scale;

  Peeler peeler(graph, flow, tol);
  PathDecomposition out;
  std::vector<int> nodes;
  std::vector<int> edges;
  for (int s = 0; s < graph.node_count(); ++s) {
    while (demand[s] < -tol) {
      const bool ok = peeler.walk(
          s, [&](int v) { return demand[v] > tol; }, nodes, edges);
      if (!ok) break;
      const double b =
          std::min({peeler.bottleneck(edges), -demand[s], demand[nodes.back()]});
      peeler.subtract(edges, b);
      demand[s] += b;
      demand[nodes.back()] -= b;
      out.paths.push_back({DirectedPath{nodes, edges}, b});
    }
  }
  // Leftover circulation.
  for (int e = 0; e < graph.edge_count(); ++e) {
    while (peeler.rest()[e] > tol) {
      const int start = graph.edge(e).tail;
      const std::size_t before = peeler.cycles().size();
      peeler.walk(start, [](int) { return false; }, nodes, edges);
      if (peeler.cycles().size() == before) break;
    }
  }
  out.cycles = std::move(peeler.cycles());
  MergeSameNodes(out.paths);
  MergeSameNodes(out.cycles);
  return out;
}

PathDecomposition decompose(const Graph& graph, std::span<const double> flow) {
  return decompose(graph, flow, divergence(graph, flow));
}

FlowVector reconstruct(const Graph& graph, const PathDecomposition& decomp) {
  FlowVector j(graph.edge_count(), 0.0);
  for (const auto* list : {&decomp.paths, &decomp.cycles}) {
    for (const PathFlow& pf : *list) {
      for (int e : pf.path.edges) j[e] += pf.flow;
    }
  }
  return j;
}

BoundsReport check_bounds(const Graph& graph, const PathDecomposition& decomp,
                          std::span<const double> f, double slack) {
  RequireSize(f.size(), graph.node_count(), "mass vector");
  BoundsReport rep;
  rep.max_path_excess = -std::numeric_limits<double>::infinity();
  rep.max_edge_excess = -std::numeric_limits<double>::infinity();
  if (!decomp.cycles.empty()) {
    rep.ok = false;
    rep.violations.push_back("decomposition contains " +
                             std::to_string(decomp.cycles.size()) + " cycles");
  }
  for (std::size_t i = 0; i < decomp.paths.size(); ++i) {
    const PathFlow& pf = decomp.paths[i];
    const double excess = pf.flow + f[pf.path.source()];
    rep.max_path_excess = std::max(rep.max_path_excess, excess);
    if (excess > slack) {
      rep.ok = false;
      rep.violations.push_back("path " + std::to_string(i) + " from node " +
                               std::to_string(pf.path.source()) +
                               " carries more than its source supplies");
    }
  }
  double supply = 0.0;
  for (double x : f) supply += x < 0.0 ? -x : 0.0;
  const FlowVector j = reconstruct(graph, decomp);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double excess = j[e] - supply;
    rep.max_edge_excess = std::max(rep.max_edge_excess, excess);
    if (excess > slack) {
      rep.ok = false;
      rep.violations.push_back("edge " + std::to_string(e) +
                               " exceeds the total source mass");
    }
  }
  return rep;
}

std::vector<std::vector<int>> path_overlap(const PathDecomposition& decomp) {
  const std::size_t m = decomp.paths.size();
  std::vector<std::vector<int>> s(m, std::vector<int>(m, 0));
  std::vector<std::vector<int>> sorted(m);
  for (std::size_t i = 0; i < m; ++i) {
    sorted[i] = decomp.paths[i].path.edges;
    std::sort(sorted[i].begin(), sorted[i].end());
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i; k < m; ++k) {
      std::vector<int> common;
      std::set_intersection(sorted[i].begin(), sorted[i].end(),
                            sorted[k].begin(), sorted[k].end(),
                            std::back_inserter(common));
      s[i][k] = s[k][i] = static_cast<int>(common.size());
    }
  }
  return s;
}

double path_objective(const Graph& graph, const PathDecomposition& decomp,
                      double alpha) {
  if (!decomp.cycles.empty()) {
    throw InvalidInput("path objective needs a cycle-free decomposition");
  }
  const auto s = path_overlap(decomp);
  const std::size_t m = decomp.paths.size();
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double path_cost = 0.0;
    for (int e : decomp.paths[i].path.edges) path_cost += graph.cost(e);
    lin += path_cost * decomp.paths[i].flow;
    for (std::size_t k = 0; k < m; ++k) {
      quad += decomp.paths[i].flow * s[i][k] * decomp.paths[k].flow;
    }
  }
  return lin + 0.5 * alpha * quad;
}

std::vector<double> DivergenceFreeDiff::term_path_vector(int k) const {
  std::vector<double> r(universe.size(), 0.0);
  for (int i : terms[k].minus_paths) r[i] += 1.0;
  for (int i : terms[k].plus_paths) r[i] -= 1.0;
  return r;
}

EdgeVector DivergenceFreeDiff::term_arc_flow(const Graph& graph, int k) const {
  EdgeVector r(graph.edge_count(), 0.0);
  for (int i : terms[k].minus_paths) {
    for (int e : universe[i].edges) r[e] += 1.0;
  }
  for (int i : terms[k].plus_paths) {
    for (int e : universe[i].edges) r[e] -= 1.0;
  }
  return r;
}

std::vector<double> DivergenceFreeDiff::residual() const {
  std::vector<double> r(universe.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = flow1[i] - flow2[i];
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::vector<double> rk = term_path_vector(static_cast<int>(k));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= terms[k].epsilon * rk[i];
  }
  return r;
}

DivergenceFreeDiff divergence_free_diff(const Graph& graph,
                                        const PathDecomposition& first,
                                        const PathDecomposition& second,
                                        std::span<const double> f,
                                        double tol, double div_tol) {
  RequireSize(f.size(), graph.node_count(), "mass vector");
  if (!first.cycles.empty() || !second.cycles.empty()) {
    throw InvalidInput("divergence-free difference needs cycle-free inputs");
  }
  const NodeVector div1 = divergence(graph, reconstruct(graph, first));
  const NodeVector div2 = divergence(graph, reconstruct(graph, second));
  for (int v = 0; v < graph.node_count(); ++v) {
    if (std::abs(div1[v] - f[v]) > div_tol ||
        std::abs(div2[v] - f[v]) > div_tol) {
      throw InvalidInput("decompositions do not share the divergence f at node " +
                         std::to_string(v));
    }
  }

  DivergenceFreeDiff out;
  std::map<std::vector<int>, int> key;
  auto slot = [&](const DirectedPath& p) {
    auto [it, fresh] = key.emplace(p.nodes, static_cast<int>(out.universe.size()));
    if (fresh) {
      out.universe.push_back(p);
      out.flow1.push_back(0.0);
      out.flow2.push_back(0.0);
    }
    return it->second;
  };
  for (const PathFlow& pf : first.paths) out.flow1[slot(pf.path)] += pf.flow;
  for (const PathFlow& pf : second.paths) out.flow2[slot(pf.path)] += pf.flow;

  const int m = static_cast<int>(out.universe.size());
  std::vector<double> running = out.flow2;
  auto gap = [&](int r) { return out.flow1[r] - running[r]; };

  std::unordered_map<int, std::vector<int>> by_source;
  std::unordered_map<int, std::vector<int>> by_target;
  for (int r = 0; r < m; ++r) {
    by_source[out.universe[r].source()].push_back(r);
    by_target[out.universe[r].target()].push_back(r);
  }

  for (int iter = 0;; ++iter) {
    if (iter > m) {
      throw Error("divergence-free difference did not terminate");
    }
    int r0 = -1;
    for (int r = 0; r < m; ++r) {
      if (std::abs(gap(r)) > tol &&
          (r0 < 0 || std::abs(gap(r)) > std::abs(gap(r0)))) {
        r0 = r;
      }
    }
    if (r0 < 0) break;
    // sign > 0: r0 carries more in the first flow. The chain alternates
    // between paths of the opposite and the same discrepancy.
    const double sign = gap(r0) > 0.0 ? 1.0 : -1.0;

    std::vector<int> chain{r0};
    // Source s_j for even j and target t_j for odd j (plus t_0), by index.
    std::map<int, int> source_at;  // node -> chain index
    std::map<int, int> target_at;
    source_at[out.universe[r0].source()] = 0;
    target_at[out.universe[r0].target()] = 0;
    int cur_source = out.universe[r0].source();
    int cur_target = out.universe[r0].target();
    int first_in_loop = -1;
    for (int n = 1;; ++n) {
      const bool odd = (n % 2) == 1;
      // Odd steps leave the current source on a path with the opposite
      // discrepancy; even steps enter the current target on a path with the
      // same discrepancy.
      const auto& candidates =
          odd ? by_source[cur_source] : by_target[cur_target];
      int pick = -1;
      double best = 0.0;
      for (int r : candidates) {
        const double d = odd ? -sign * gap(r) : sign * gap(r);
        if (d > tol && d > best) {
          best = d;
          pick = r;
        }
      }
      if (pick < 0) {
        // Rounding can spread the balancing discrepancy below tol; take the
        // largest strictly positive one.
        for (int r : candidates) {
          const double d = odd ? -sign * gap(r) : sign * gap(r);
          if (d > best) {
            best = d;
            pick = r;
          }
        }
      }
      if (pick < 0) {
        throw Error(
            "no balancing path found; flows do not share per-node totals");
      }
      chain.push_back(pick);
      if (odd) {
        cur_target = out.universe[pick].target();
        auto it = target_at.find(cur_target);
        if (it != target_at.end()) {
          first_in_loop = it->second == 0 ? 0 : it->second + 1;
          break;
        }
        target_at[cur_target] = n;
      } else {
        cur_source = out.universe[pick].source();
        auto it = source_at.find(cur_source);
        if (it != source_at.end()) {
          first_in_loop = it->second + 1;
          break;
        }
        source_at[cur_source] = n;
      }
      if (n > 2 * m + 2) {
        throw Error("alternating chain did not close");
      }
    }

    DivergenceFreeDiff::Term term;
    double eps = std::numeric_limits<double>::infinity();
    for (std::size_t j = first_in_loop; j < chain.size(); ++j) {
      const int r = chain[j];
      (gap(r) > 0.0 ? term.minus_paths : term.plus_paths).push_back(r);
      eps = std::min(eps, std::abs(gap(r)));
    }
    term.epsilon = eps;
    for (std::size_t j = first_in_loop; j < chain.size(); ++j) {
      const int r = chain[j];
      if (std::abs(gap(r)) == eps) {
        running[r] = out.flow1[r];
      } else {
        running[r] += gap(r) > 0.0 ? eps : -eps;
      }
    }
    std::sort(term.minus_paths.begin(), term.minus_paths.end());
    std::sort(term.plus_paths.begin(), term.plus_paths.end());
    out.terms.push_back(std::move(term));
  }
  return out;
}

}  // namespace qrot
