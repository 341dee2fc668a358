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

#include "qrot/io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qrot {
namespace {

// Next content line; false at end of input.
bool NextLine(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void Fail(int lineno, const std::string& what) {
  throw ParseError("line " + std::to_string(lineno) + ": " + what);
}

void ExpectEnd(std::istringstream& ss, int lineno) {
  std::string extra;
  if (ss >> extra) Fail(lineno, "unexpected trailing token '" + extra + "'");
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

// "<index> <value>" records into a dense vector.
std::vector<double> ReadIndexed(std::istream& in, int size, const char* what) {
  std::vector<double> x(size, 0.0);
  std::vector<char> seen(size, 0);
  std::string line;
  int lineno = 0;
  while (NextLine(in, line, lineno)) {
    std::istringstream ss(line);
    long idx;
    double value;
    if (!(ss >> idx >> value)) Fail(lineno, std::string("expected '<") + what + "> <value>'");
    ExpectEnd(ss, lineno);
    if (idx < 0 || idx >= size) {
      Fail(lineno, std::string(what) + " " + std::to_string(idx) + " out of range");
    }
    if (!std::isfinite(value)) Fail(lineno, "value is not finite");
    if (seen[idx]) Fail(lineno, std::string("duplicate ") + what + " " + std::to_string(idx));
    seen[idx] = 1;
    x[idx] = value;
  }
  return x;
}

void WriteIndexed(std::ostream& out, std::span<const double> x) {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < x.size(); ++i) out << i << ' ' << x[i] << '\n';
  out.precision(old);
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!NextLine(in, line, lineno)) throw ParseError("empty graph input");
  std::istringstream header(line);
  std::string tag;
  long n;
  long m;
  if (!(header >> tag >> n >> m) || tag != "graph") {
    Fail(lineno, "expected header 'graph <node_count> <edge_count>'");
  }
  ExpectEnd(header, lineno);
  if (n < 1 || m < 0) Fail(lineno, "bad node or edge count");
  std::vector<Edge> edges;
  std::vector<double> costs;
  edges.reserve(m);
  costs.reserve(m);
  while (NextLine(in, line, lineno)) {
    std::istringstream ss(line);
    long tail;
    long head;
    double cost;
    if (!(ss >> tail >> head >> cost)) Fail(lineno, "expected '<tail> <head> <cost>'");
    ExpectEnd(ss, lineno);
    if (tail < 0 || tail >= n || head < 0 || head >= n) {
      Fail(lineno, "node index out of range");
    }
    if (static_cast<long>(edges.size()) == m) Fail(lineno, "more edges than the header declares");
    edges.push_back({static_cast<int>(tail), static_cast<int>(head)});
    costs.push_back(cost);
  }
  if (static_cast<long>(edges.size()) != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  }
  try {
    return Graph(static_cast<int>(n), std::move(edges), std::move(costs));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& graph) {
  const auto old = out.precision(17);
  out << "graph " << graph.node_count() << ' ' << graph.edge_count() << '\n';
  for (int e = 0; e < graph.edge_count(); ++e) {
    out << graph.edge(e).tail << ' ' << graph.edge(e).head << ' ' << graph.cost(e) << '\n';
  }
  out.precision(old);
}

void write_graph_file(const std::string& path, const Graph& graph) {
  std::ofstream out = OpenOut(path);
  write_graph(out, graph);
}

MassVector read_mass(std::istream& in, int node_count) {
  MassVector f = ReadIndexed(in, node_count, "node");
  double sum = 0.0;
  for (double x : f) sum += x;
  if (std::abs(sum) > 1e-9) {
    std::ostringstream msg;
    msg << "unbalanced mass: entries sum to " << std::setprecision(17) << sum;
    throw ParseError(msg.str());
  }
  return f;
}

MassVector read_mass_file(const std::string& path, int node_count) {
  std::ifstream in = OpenIn(path);
  return read_mass(in, node_count);
}

void write_mass(std::ostream& out, std::span<const double> f) {
  const auto old = out.precision(17);
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f[v] != 0.0) out << v << ' ' << f[v] << '\n';
  }
  out.precision(old);
}

void write_mass_file(const std::string& path, std::span<const double> f) {
  std::ofstream out = OpenOut(path);
  write_mass(out, f);
}

FlowVector read_flow(std::istream& in, int edge_count) {
  return ReadIndexed(in, edge_count, "edge");
}

FlowVector read_flow_file(const std::string& path, int edge_count) {
  std::ifstream in = OpenIn(path);
  return read_flow(in, edge_count);
}

void write_flow(std::ostream& out, std::span<const double> flow) {
  WriteIndexed(out, flow);
}

void write_flow_file(const std::string& path, std::span<const double> flow) {
  std::ofstream out = OpenOut(path);
  write_flow(out, flow);
}

}  // namespace qrot
