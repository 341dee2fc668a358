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

#ifndef QROT_IO_H_
#define QROT_IO_H_

#include <iosfwd>
#include <string>

#include "qrot/common.h"
#include "qrot/graph.h"

namespace qrot {

// Line formats. Blank lines and lines starting with '#' are skipped.
//   graph:  "graph <n> <m>" then m lines "<tail> <head> <cost>"
//   mass:   "<node> <value>" per line, unlisted nodes are 0
//   flow:   "<edge> <value>" per line, unlisted edges are 0
// Reals are written with 17 significant digits so they round-trip.

Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& graph);
void write_graph_file(const std::string& path, const Graph& graph);

// Rejects |sum f| > 1e-9.
MassVector read_mass(std::istream& in, int node_count);
MassVector read_mass_file(const std::string& path, int node_count);
void write_mass(std::ostream& out, std::span<const double> f);
void write_mass_file(const std::string& path, std::span<const double> f);

FlowVector read_flow(std::istream& in, int edge_count);
FlowVector read_flow_file(const std::string& path, int edge_count);
void write_flow(std::ostream& out, std::span<const double> flow);
void write_flow_file(const std::string& path, std::span<const double> flow);

}  // namespace qrot

#endif  // QROT_IO_H_
