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

#include "qrot/baselines.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dual_ascent.h"
#include "qrot/cholesky.h"

namespace qrot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class GradientPolicy final : public internal::DirectionPolicy {
 public:
  void start(const DualState&) override {}
  NodeVector direction(const DualState&, const NodeVector& gradient,
                       int) override {
    NodeVector s = gradient;
    CenterInPlace(s);
    return s;
  }
};

class FullLaplacianPolicy final : public internal::DirectionPolicy {
 public:
  explicit FullLaplacianPolicy(const Graph& graph)
      : full_mask_(graph.edge_count(), 1),
        labeling_(components(graph, full_mask_)),
        factor_(factorize(graph, full_mask_, labeling_)) {}

  void start(const DualState&) override {}
  NodeVector direction(const DualState&, const NodeVector& gradient,
                       int k) override {
    if (k % 2 == 1) {
      NodeVector s = gradient;
      CenterInPlace(s);
      return s;
    }
    return internal::pseudo_newton_or_gradient(factor_, labeling_, gradient);
  }

 private:
  ActiveMask full_mask_;
  ComponentLabeling labeling_;
  CholeskyFactor factor_;
};

// Residual network for successive shortest paths. Nodes n and n + 1 are
// the super source and super sink.
struct Arc {
  int to;
  int rev;
  double cap;
  double cost;
  int edge;  // graph edge for forward arcs, -1 otherwise
};

class Residual {
 public:
  explicit Residual(int nodes) : adj_(nodes) {}

  // Adds u->v with capacity `cap` and its zero-capacity reverse arc.
  void add(int u, int v, double cap, double cost, int edge) {
    adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap, cost, edge});
    adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, 0.0, -cost, -1});
  }

  std::vector<std::vector<Arc>>& adj() { return adj_; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

SolveReport gradient_ascent(const Graph& graph, std::span<const double> f,
                            const SolverConfig& config) {
  config.validate();
  validate_mass(graph, f);
  GradientPolicy policy;
  return internal::run_dual_ascent(
      graph, f, config, initial_potential(graph.node_count(), config.seed),
      policy, "graddescent", 1, config.max_iter);
}

SolveReport precond_gradient(const Graph& graph, std::span<const double> f,
                             const SolverConfig& config) {
  config.validate();
  validate_mass(graph, f);
  FullLaplacianPolicy policy(graph);
  return internal::run_dual_ascent(
      graph, f, config, initial_potential(graph.node_count(), config.seed),
      policy, "precondgrad", 1, config.max_iter);
}

OracleResult lp_oracle(const Graph& graph, std::span<const double> f) {
  validate_mass(graph, f);
  const int n = graph.node_count();
  const int source = n;
  const int sink = n + 1;
  const int total = n + 2;

  double supply = 0.0;
  for (double x : f) supply += x < 0.0 ? -x : 0.0;
  const double eps = 1e-12 * std::max(1.0, supply);
  // Reduced costs within this slack of zero count as zero.
  constexpr double kSlack = 1e-12;

  Residual net(total);
  for (int e = 0; e < graph.edge_count(); ++e) {
    net.add(graph.edge(e).tail, graph.edge(e).head, kInf, graph.cost(e), e);
  }
  for (int v = 0; v < n; ++v) {
    if (f[v] < 0.0) net.add(source, v, -f[v], 0.0, -1);
    if (f[v] > 0.0) net.add(v, sink, f[v], 0.0, -1);
  }
  auto& adj = net.adj();

  // Bellman-Ford from the super source over arcs with capacity.
  std::vector<double> pi(total, 0.0);
  {
    std::vector<double> dist(total, kInf);
    dist[source] = 0.0;
    bool changed = true;
    for (int round = 0; round < total && changed; ++round) {
      changed = false;
      for (int u = 0; u < total; ++u) {
        if (dist[u] == kInf) continue;
        for (const Arc& a : adj[u]) {
          if (a.cap <= eps) continue;
          if (dist[u] + a.cost < dist[a.to] - kSlack) {
            dist[a.to] = dist[u] + a.cost;
            changed = true;
          }
        }
      }
      if (changed && round == total - 1) {
        throw InvalidInput("negative-cost cycle in the flow network");
      }
    }
    double reach = 0.0;
    for (double d : dist) {
      if (d < kInf) reach = std::max(reach, d);
    }
    for (int v = 0; v < total; ++v) pi[v] = dist[v] < kInf ? dist[v] : reach;
  }

  OracleResult out;
  double remaining = supply;
  std::vector<double> dist(total);
  std::vector<int> parent_node(total);
  std::vector<int> parent_arc(total);
  using Item = std::pair<double, int>;
  while (remaining > eps) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_node.begin(), parent_node.end(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int i = 0; i < static_cast<int>(adj[u].size()); ++i) {
        const Arc& a = adj[u][i];
        if (a.cap <= eps) continue;
        const double rc = std::max(0.0, a.cost + pi[u] - pi[a.to]);
        if (d + rc < dist[a.to]) {
          dist[a.to] = d + rc;
          parent_node[a.to] = u;
          parent_arc[a.to] = i;
          heap.push({dist[a.to], a.to});
        }
      }
    }
    if (dist[sink] == kInf) {
      throw Infeasible("no directed path carries the remaining " +
                       std::to_string(remaining) + " units of mass");
    }
    for (int v = 0; v < total; ++v) pi[v] += std::min(dist[v], dist[sink]);

    double bottleneck = kInf;
    for (int v = sink; v != source; v = parent_node[v]) {
      bottleneck = std::min(bottleneck, adj[parent_node[v]][parent_arc[v]].cap);
    }
    for (int v = sink; v != source; v = parent_node[v]) {
      Arc& a = adj[parent_node[v]][parent_arc[v]];
      a.cap -= bottleneck;
      adj[a.to][a.rev].cap += bottleneck;
    }
    remaining -= bottleneck;
    ++out.augmentations;
  }

  out.flow.assign(graph.edge_count(), 0.0);
  for (int u = 0; u < n; ++u) {
    for (const Arc& a : adj[u]) {
      if (a.edge >= 0) out.flow[a.edge] = adj[a.to][a.rev].cap;
    }
  }
  out.optimal_value = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    out.optimal_value += graph.cost(e) * out.flow[e];
  }
  out.node_potentials.assign(pi.begin(), pi.begin() + n);
  return out;
}

CertificateCheck check_certificate(const Graph& graph,
                                   std::span<const double> f,
                                   const OracleResult& result, double tol) {
  CertificateCheck check;
  const NodeVector div = divergence(graph, result.flow);
  double feas = 0.0;
  for (int v = 0; v < graph.node_count(); ++v) {
    feas = std::max(feas, std::abs(div[v] - f[v]));
  }
  bool nonneg_flow = true;
  for (double x : result.flow) nonneg_flow = nonneg_flow && x >= 0.0;
  check.feasible = nonneg_flow && feas <= tol;
  check.max_violation = feas;

  check.reduced_costs_nonnegative = true;
  check.complementary_slackness = true;
  const auto& p = result.node_potentials;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double rc = graph.cost(e) - (p[ed.head] - p[ed.tail]);
    if (rc < -tol) check.reduced_costs_nonnegative = false;
    if (result.flow[e] > tol && std::abs(rc) > tol) {
      check.complementary_slackness = false;
    }
    check.max_violation = std::max(check.max_violation, -rc);
  }
  return check;
}

}  // namespace qrot
