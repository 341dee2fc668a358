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

#include "qrot/simd/kernels.h"

namespace qrot::simd {
namespace {

double DotScalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void AxpyScalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void ScaleScalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void GivensScalar(double* row, double* w, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = row[i];
    const double x = w[i];
    row[i] = c * r + s * x;
    w[i] = c * x - s * r;
  }
}

void HyperbolicScalar(double* row, double* w, std::size_t n, double c,
                      double s) {
  const double inv_c = 1.0 / c;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (row[i] - s * w[i]) * inv_c;
    row[i] = r;
    w[i] = c * w[i] - s * r;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Backend::kScalar, DotScalar,   AxpyScalar,
                         ScaleScalar,      GivensScalar, HyperbolicScalar};
  return k;
}

}  // namespace qrot::simd
