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


// Random pairs of cycle-free path decompositions with identical divergence,
// built from two transport plans with equal marginals. All amounts are
// multiples of 1/8 so sums are exact.

#ifndef QROT_TESTS_RANDOM_PAIRS_H_
#define QROT_TESTS_RANDOM_PAIRS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qrot/decomposition.h"
#include "qrot/generators.h"
#include "qrot/random.h"

namespace qrot::testing {

struct DecompositionPair {
  Graph graph;
  MassVector f;
  PathDecomposition first;
  PathDecomposition second;
};

// Simple s-t path by depth-first search with shuffled neighbor order.
inline std::vector<int> RandomSimplePath(const Graph& g, int s, int t, Rng& rng) {
  std::vector<int> parent(g.node_count(), -2);
  std::vector<int> stack = {s};
  parent[s] = -1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == t) break;
    std::vector<int> next;
    for (int e : g.incident_edges(u)) {
      if (g.edge(e).tail == u && parent[g.edge(e).head] == -2) {
        next.push_back(g.edge(e).head);
      }
    }
    for (std::size_t i = next.size(); i > 1; --i) {
      std::swap(next[i - 1], next[rng.below(i)]);
    }
    for (int w : next) {
      if (parent[w] == -2) {
        parent[w] = u;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> path;
  for (int v = t; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

inline DecompositionPair MakeDecompositionPair(std::uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  const int n = 12 + static_cast<int>(rng.below(20));
  Graph g = gen_random_graph(n, seed);
  std::vector<int> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = i;
  for (int i = n; i > 1; --i) std::swap(nodes[i - 1], nodes[rng.below(i)]);
  const int ns = 2 + static_cast<int>(rng.below(3));
  const int nt = 2 + static_cast<int>(rng.below(3));
  const std::vector<int> src(nodes.begin(), nodes.begin() + ns);
  const std::vector<int> dst(nodes.begin() + ns, nodes.begin() + ns + nt);

  auto eighths = [&](int max) { return static_cast<double>(rng.below(8 * max + 1)) / 8.0; };
  std::vector<std::vector<double>> plan1(ns, std::vector<double>(nt));
  for (auto& row : plan1) {
    for (double& x : row) x = rng.uniform() < 0.3 ? 0.0 : eighths(3);
  }
  plan1[0][0] += 1.0;
  auto plan2 = plan1;
  for (int swap = 0; swap < 4; ++swap) {
    const int a = static_cast<int>(rng.below(ns)), b = static_cast<int>(rng.below(ns));
    const int c = static_cast<int>(rng.below(nt)), d = static_cast<int>(rng.below(nt));
    if (a == b || c == d) continue;
    const double room = std::min(plan2[a][c], plan2[b][d]);
    const double delta = std::floor(room * 8.0 * rng.uniform()) / 8.0;
    plan2[a][c] -= delta;
    plan2[b][d] -= delta;
    plan2[a][d] += delta;
    plan2[b][c] += delta;
  }

  MassVector f(n, 0.0);
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      f[src[i]] -= plan1[i][j];
      f[dst[j]] += plan1[i][j];
    }
  }

  // A small pool of routes per (s, t); each plan splits its amount over
  // one or two of them.
  std::vector<std::vector<std::vector<DirectedPath>>> pool(ns, std::vector<std::vector<DirectedPath>>(nt));
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < 3; ++k) {
        pool[i][j].push_back(make_path(g, RandomSimplePath(g, src[i], dst[j], rng)));
      }
    }
  }
  auto build = [&](const std::vector<std::vector<double>>& plan) {
    PathDecomposition d;
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < nt; ++j) {
        const double amount = plan[i][j];
        if (amount <= 0.0) continue;
        const auto& routes = pool[i][j];
        const DirectedPath& p = routes[rng.below(routes.size())];
        const double part = std::floor(amount * 8.0 * rng.uniform()) / 8.0;
        const DirectedPath& q = routes[rng.below(routes.size())];
        if (part > 0.0 && !(q == p)) {
          d.paths.push_back({q, part});
          d.paths.push_back({p, amount - part});
        } else {
          d.paths.push_back({p, amount});
        }
      }
    }
    return d;
  };
  PathDecomposition first = build(plan1);
  PathDecomposition second = build(plan2);
  return {std::move(g), std::move(f), std::move(first), std::move(second)};
}

}  // namespace qrot::testing

#endif  // QROT_TESTS_RANDOM_PAIRS_H_
