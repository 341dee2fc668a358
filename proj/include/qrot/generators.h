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

#ifndef QROT_GENERATORS_H_
#define QROT_GENERATORS_H_

#include <cstdint>
#include <vector>

#include "qrot/common.h"
#include "qrot/graph.h"

namespace qrot {

enum class CostModel {
  kUnit,
  // Uniform on (0, 1].
  kUniform,
};

// Connected random graph with heavy-tailed degrees on [1, 10] and mean
// degree near 5, each undirected edge emitted in both directions. Edges are
// sorted by (tail, head). For n <= 10 the degree cap is n - 1.
Graph gen_random_graph(int n, std::uint64_t seed,
                       CostModel costs = CostModel::kUnit);

// N x N lattice, node r * N + c, both directions, unit costs.
Graph gen_grid(int side);

// ceil(n / 10) nodes (at least two) get values uniform on (-10, 10)
// rounded to multiples of 2^-20; the last chosen node balances the sum,
// which is then exactly zero.
MassVector gen_mass(const Graph& graph, std::uint64_t seed);

// Degree distribution used by gen_random_graph: P(d) proportional to
// (d + offset)^-2.5 on {1, ..., max_degree}.
struct DegreeLaw {
  int max_degree = 10;
  double offset = 0.0;
  std::vector<double> cdf;

  double mean() const;
};

DegreeLaw degree_law(int max_degree, double target_mean);

}  // namespace qrot

#endif  // QROT_GENERATORS_H_
