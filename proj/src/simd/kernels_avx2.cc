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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "qrot/simd/kernels.h"

namespace qrot::simd {
namespace {

double DotAvx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void AxpyAvx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void ScaleAvx2(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void GivensAvx2(double* row, double* w, std::size_t n, double c, double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(row + i);
    const __m256d x = _mm256_loadu_pd(w + i);
    _mm256_storeu_pd(row + i, _mm256_fmadd_pd(vc, r, _mm256_mul_pd(vs, x)));
    _mm256_storeu_pd(w + i, _mm256_fmsub_pd(vc, x, _mm256_mul_pd(vs, r)));
  }
  for (; i < n; ++i) {
    const double r = row[i];
    const double x = w[i];
    row[i] = c * r + s * x;
    w[i] = c * x - s * r;
  }
}

void HyperbolicAvx2(double* row, double* w, std::size_t n, double c,
                    double s) {
  const double inv_c = 1.0 / c;
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d vinv = _mm256_set1_pd(inv_c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(w + i);
    const __m256d r = _mm256_mul_pd(
        _mm256_fnmadd_pd(vs, x, _mm256_loadu_pd(row + i)), vinv);
    _mm256_storeu_pd(row + i, r);
    _mm256_storeu_pd(w + i, _mm256_fmsub_pd(vc, x, _mm256_mul_pd(vs, r)));
  }
  for (; i < n; ++i) {
    const double r = (row[i] - s * w[i]) * inv_c;
    row[i] = r;
    w[i] = c * w[i] - s * r;
  }
}

}  // namespace

const Kernels& avx2_kernel_table() {
  static const Kernels k{Backend::kAvx2, DotAvx2,   AxpyAvx2,
                         ScaleAvx2,      GivensAvx2, HyperbolicAvx2};
  return k;
}

}  // namespace qrot::simd
