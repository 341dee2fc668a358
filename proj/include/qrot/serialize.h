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


#ifndef QROT_SERIALIZE_H_
#define QROT_SERIALIZE_H_

#include <string>
#include <string_view>

#include "qrot/baselines.h"
#include "qrot/decomposition.h"
#include "qrot/harness.h"
#include "qrot/solver.h"

namespace qrot {

// One "key=value" per line, scalars only.
std::string to_text(const SolveReport& report);

// JSON documents. Vectors of a SolveReport (p, flow, dual_trace) are
// included unless `with_vectors` is false.
std::string to_json(const SolveReport& report, bool with_vectors = true);
std::string to_json(const OracleResult& result);
// {"paths": [{"nodes": [...], "flow": x}], "cycles": [...]}
std::string to_json(const PathDecomposition& decomp);
std::string to_json(const MonotonicityReport& report);

// Inverse of to_json(SolveReport). Throws ParseError.
SolveReport solve_report_from_json(std::string_view text);

// {"sizes": [...], "alphas": [...], "seeds_per_cell": 10,
//  "solvers": ["hessupdate", ...], "max_iter": 3000, "grad_tol": 1e-8,
//  "base_seed": 0, "costs": "unit" | "uniform", "threads": 1}
// Missing optional keys keep their defaults; unknown keys are rejected.
BenchSpec parse_bench_spec(std::string_view text);
BenchSpec read_bench_spec_file(const std::string& path);

}  // namespace qrot

#endif  // QROT_SERIALIZE_H_
