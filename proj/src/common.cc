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

#include "qrot/common.h"

#include <cmath>

#include "qrot/simd/kernels.h"

namespace qrot {

double Dot(std::span<const double> a, std::span<const double> b) {
  RequireSize(b.size(), a.size(), "dot operand");
  return simd::kernels().dot(a.data(), b.data(), a.size());
}

double Norm2(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

void CenterInPlace(std::span<double> a) {
  if (a.empty()) return;
  double s = 0.0;
  for (double x : a) s += x;
  const double mean = s / static_cast<double>(a.size());
  for (double& x : a) x -= mean;
}

}  // namespace qrot
