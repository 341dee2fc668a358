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

#ifndef QROT_SIMD_KERNELS_H_
#define QROT_SIMD_KERNELS_H_

#include <cstddef>

// Dense double-precision row kernels used by the Cholesky factor. Every
// kernel has a scalar reference; vector variants are selected at runtime
// from CPU features and must agree with the reference up to rounding.

namespace qrot::simd {

enum class Backend { kScalar, kAvx2 };

struct Kernels {
  Backend backend;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // x *= a
  void (*scale)(double* x, double a, std::size_t n);
  // Plane rotation of (row, w):
  //   row' = c * row + s * w,  w' = c * w - s * row
  void (*givens)(double* row, double* w, std::size_t n, double c, double s);
  // Hyperbolic rotation used by Cholesky downdates:
  //   row' = (row - s * w) / c,  w' = c * w - s * row'
  void (*hyperbolic)(double* row, double* w, std::size_t n, double c,
                     double s);
};

const Kernels& scalar_kernels();
// nullptr when the variant is not compiled in or the CPU lacks the features.
const Kernels* avx2_kernels();

// Kernels currently in use. Defaults to the widest supported backend; the
// environment variable QROT_SIMD=scalar forces the reference kernels.
const Kernels& kernels();
Backend active_backend();
bool backend_available(Backend backend);
// Throws std::invalid_argument if the backend is unavailable.
void set_backend(Backend backend);
const char* backend_name(Backend backend);

}  // namespace qrot::simd

#endif  // QROT_SIMD_KERNELS_H_
