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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "qrot/simd/kernels.h"

namespace qrot::simd {

#if defined(QROT_HAVE_AVX2_KERNELS)
const Kernels& avx2_kernel_table();
#endif

namespace {

bool CpuHasAvx2() {
#if defined(QROT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels* DefaultKernels() {
  const char* env = std::getenv("QROT_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) {
    return &scalar_kernels();
  }
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& Active() {
  static std::atomic<const Kernels*> active{DefaultKernels()};
  return active;
}

}  // namespace

const Kernels* avx2_kernels() {
#if defined(QROT_HAVE_AVX2_KERNELS)
  static const bool ok = CpuHasAvx2();
  return ok ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& kernels() { return *Active().load(std::memory_order_acquire); }

Backend active_backend() { return kernels().backend; }

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return avx2_kernels() != nullptr;
  }
  return false;
}

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument(std::string("SIMD backend unavailable: ") +
                                backend_name(backend));
  }
  const Kernels* k =
      backend == Backend::kAvx2 ? avx2_kernels() : &scalar_kernels();
  Active().store(k, std::memory_order_release);
}

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace qrot::simd
