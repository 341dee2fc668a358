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

#ifndef QROT_COMMON_H_
#define QROT_COMMON_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrot {

// Per-node vectors (mass, potentials) and per-edge vectors (flows, slacks)
// are plain dense arrays indexed by node or edge id.
using NodeVector = std::vector<double>;
using EdgeVector = std::vector<double>;
using FlowVector = EdgeVector;
using MassVector = NodeVector;
using DualPotential = NodeVector;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad dimensions, invalid graphs,
// unbalanced mass.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Text input that could not be parsed.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// The transport problem has no feasible flow (the dual is unbounded).
class Infeasible : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

inline void RequireSize(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InvalidInput(std::string(what) + ": expected " +
                       std::to_string(want) + " entries, got " +
                       std::to_string(got));
  }
}

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> a);
// Subtracts the mean so the entries sum to zero.
void CenterInPlace(std::span<double> a);

}  // namespace qrot

#endif  // QROT_COMMON_H_
