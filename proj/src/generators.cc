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

#include "qrot/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "qrot/random.h"

namespace qrot {
namespace {

constexpr double kExponent = 2.5;
constexpr double kTargetMean = 5.0;
constexpr double kMeanSlack = 0.5;
constexpr int kMaxAttempts = 1000;

double LawMean(int max_degree, double offset) {
  double z = 0.0;
  double s = 0.0;
  for (int d = 1; d <= max_degree; ++d) {
    const double w = std::pow(d + offset, -kExponent);
    z += w;
    s += d * w;
  }
  return s / z;
}

// Simple undirected graph under construction.
struct Multigraph {
  explicit Multigraph(int n) : adj(n) {}

  std::vector<std::vector<int>> adj;
  std::vector<std::pair<int, int>> edges;

  void add(int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
    edges.emplace_back(a, b);
  }
  void remove(std::size_t idx) {
    auto [a, b] = edges[idx];
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
    adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
    edges[idx] = edges.back();
    edges.pop_back();
  }
};

// Havel-Hakimi; false if the sequence is not graphical.
bool Realize(const std::vector<int>& degree, Multigraph& g) {
  const int n = static_cast<int>(degree.size());
  std::vector<std::pair<int, int>> rest(n);  // (remaining degree, node)
  for (int v = 0; v < n; ++v) rest[v] = {degree[v], v};
  auto order = [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  };
  for (;;) {
    std::sort(rest.begin(), rest.end(), order);
    while (!rest.empty() && rest.back().first == 0) rest.pop_back();
    if (rest.empty()) return true;
    auto [d, v] = rest.front();
    if (d >= static_cast<int>(rest.size())) return false;
    rest.front().first = 0;
    for (int i = 1; i <= d; ++i) {
      g.add(v, rest[i].second);
      --rest[i].first;
    }
  }
}

std::vector<int> Label(const Multigraph& g, int& count) {
  const int n = static_cast<int>(g.adj.size());
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  count = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : g.adj[v]) {
        if (label[w] < 0) {
          label[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return label;
}

// Marks bridges by endpoint pair (min, max) using iterative lowlink DFS.
std::vector<char> Bridges(const Multigraph& g) {
  const int n = static_cast<int>(g.adj.size());
  std::vector<int> disc(n, -1);
  std::vector<int> low(n, 0);
  std::vector<int> parent(n, -1);
  std::vector<std::size_t> next(n, 0);
  std::vector<std::pair<int, int>> bridge_pairs;
  int time = 0;
  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0) continue;
    std::vector<int> stack{s};
    disc[s] = low[s] = time++;
    while (!stack.empty()) {
      const int v = stack.back();
      if (next[v] < g.adj[v].size()) {
        const int w = g.adj[v][next[v]++];
        if (disc[w] < 0) {
          parent[w] = v;
          disc[w] = low[w] = time++;
          stack.push_back(w);
        } else if (w != parent[v]) {
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      stack.pop_back();
      const int u = parent[v];
      if (u >= 0) {
        low[u] = std::min(low[u], low[v]);
        if (low[v] > disc[u]) bridge_pairs.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
  }
  std::sort(bridge_pairs.begin(), bridge_pairs.end());
  std::vector<char> is_bridge(g.edges.size(), 0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto [a, b] = g.edges[i];
    is_bridge[i] = std::binary_search(bridge_pairs.begin(), bridge_pairs.end(),
                                      std::make_pair(std::min(a, b), std::max(a, b)));
  }
  return is_bridge;
}

// Merges components by swaps (a,b),(c,d) -> (a,c),(b,d) where (a,b) lies on
// a cycle. Degrees are preserved. False if no component has a cycle.
bool Connect(Multigraph& g, Rng& rng) {
  const int n = static_cast<int>(g.adj.size());
  for (;;) {
    int count = 0;
    const std::vector<int> label = Label(g, count);
    if (count == 1) return true;
    std::vector<long> surplus(count, 0);
    for (int v = 0; v < n; ++v) --surplus[label[v]];
    for (auto [a, b] : g.edges) ++surplus[label[a]];
    const int host = static_cast<int>(
        std::max_element(surplus.begin(), surplus.end()) - surplus.begin());
    if (surplus[host] < 0) return false;
    int other = static_cast<int>(rng.below(count - 1));
    if (other >= host) ++other;

    const std::vector<char> is_bridge = Bridges(g);
    std::vector<std::size_t> cyclic;
    std::vector<std::size_t> target;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const int c = label[g.edges[i].first];
      if (c == host && !is_bridge[i]) cyclic.push_back(i);
      if (c == other) target.push_back(i);
    }
    if (cyclic.empty() || target.empty()) return false;
    const std::size_t i = cyclic[rng.below(cyclic.size())];
    const std::size_t j = target[rng.below(target.size())];
    auto [a, b] = g.edges[i];
    auto [c, d] = g.edges[j];
    if (rng.below(2)) std::swap(c, d);
    g.remove(std::max(i, j));
    g.remove(std::min(i, j));
    g.add(a, c);
    g.add(b, d);
  }
}

Graph Bidirect(int n, const std::vector<std::pair<int, int>>& undirected,
               Rng* rng, CostModel model) {
  std::vector<Edge> edges;
  edges.reserve(2 * undirected.size());
  for (auto [a, b] : undirected) {
    edges.push_back({a, b});
    edges.push_back({b, a});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.tail != y.tail ? x.tail < y.tail : x.head < y.head;
  });
  std::vector<double> costs(edges.size(), 1.0);
  if (model == CostModel::kUniform) {
    for (double& c : costs) c = 1.0 - rng->uniform();
  }
  return Graph(n, std::move(edges), std::move(costs));
}

}  // namespace

double DegreeLaw::mean() const { return LawMean(max_degree, offset); }

DegreeLaw degree_law(int max_degree, double target_mean) {
  if (max_degree < 1) throw InvalidInput("degree cap must be at least 1");
  DegreeLaw law;
  law.max_degree = max_degree;
  // The plain law has mean ~1.5 on {1..10}; shifting it flattens the tail
  // until the mean reaches the target. Caps too small for the target keep
  // the plain law.
  if (LawMean(max_degree, 1e9) > target_mean) {
    double lo = -1.0 + 1e-9;
    double hi = 1e9;
    if (LawMean(max_degree, lo) < target_mean) {
      for (int it = 0; it < 200; ++it) {
        const double mid = lo + (hi - lo) / 2;
        (LawMean(max_degree, mid) < target_mean ? lo : hi) = mid;
      }
      law.offset = lo + (hi - lo) / 2;
    }
  }
  double z = 0.0;
  for (int d = 1; d <= max_degree; ++d) z += std::pow(d + law.offset, -kExponent);
  double acc = 0.0;
  for (int d = 1; d <= max_degree; ++d) {
    acc += std::pow(d + law.offset, -kExponent) / z;
    law.cdf.push_back(acc);
  }
  law.cdf.back() = 1.0;
  return law;
}

Graph gen_random_graph(int n, std::uint64_t seed, CostModel costs) {
  if (n < 2) throw InvalidInput("random graph needs at least 2 nodes");
  const int cap = std::min(10, n - 1);
  const DegreeLaw law = degree_law(cap, kTargetMean);
  const bool check_mean = cap == 10;
  Rng rng(seed);
  std::vector<int> degree(n);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    long sum = 0;
    for (int& d : degree) {
      const double u = rng.uniform();
      d = static_cast<int>(std::upper_bound(law.cdf.begin(), law.cdf.end(), u) -
                           law.cdf.begin()) + 1;
      sum += d;
    }
    if (sum % 2 != 0) continue;
    const double mean = static_cast<double>(sum) / n;
    if (check_mean && std::abs(mean - kTargetMean) > kMeanSlack) continue;
    Multigraph g(n);
    if (!Realize(degree, g)) continue;
    if (!Connect(g, rng)) continue;
    return Bidirect(n, g.edges, &rng, costs);
  }
  throw InvalidInput("no connected graphical degree sequence found for n = " +
                     std::to_string(n) + " after " +
                     std::to_string(kMaxAttempts) + " attempts");
}

Graph gen_grid(int side) {
  if (side < 2) throw InvalidInput("grid side must be at least 2");
  std::vector<std::pair<int, int>> undirected;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int v = r * side + c;
      if (c + 1 < side) undirected.emplace_back(v, v + 1);
      if (r + 1 < side) undirected.emplace_back(v, v + side);
    }
  }
  return Bidirect(side * side, undirected, nullptr, CostModel::kUnit);
}

MassVector gen_mass(const Graph& graph, std::uint64_t seed) {
  const int n = graph.node_count();
  if (n < 2) throw InvalidInput("mass vector needs at least 2 nodes");
  const int k = std::min(n, std::max(2, (n + 9) / 10));
  Rng rng(seed);
  std::vector<int> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(n - i));
    std::swap(nodes[i], nodes[j]);
  }
  MassVector f(n, 0.0);
  double sum = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    const double x = std::round(rng.uniform(-10.0, 10.0) * 0x1.0p20) * 0x1.0p-20;
    f[nodes[i]] = x;
    sum += x;
  }
  f[nodes[k - 1]] = -sum;
  return f;
}

}  // namespace qrot
