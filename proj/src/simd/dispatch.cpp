// Copyright 2026 The dlkv Authors.
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
#include <stdexcept>
#include <string>

#include "dlkv/simd/kernels.hpp"

namespace dlkv::simd {

#if defined(DLKV_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(DLKV_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(DLKV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("DLKV_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && kernels_for(Isa::kAvx2)) return kernels_for(Isa::kAvx2);
    if (want == "neon" && kernels_for(Isa::kNeon)) return kernels_for(Isa::kNeon);
  }
  if (const KernelTable* t = kernels_for(Isa::kAvx2)) return t;
  if (const KernelTable* t = kernels_for(Isa::kNeon)) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_kernels();
    case Isa::kAvx2:
#if defined(DLKV_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_kernels();
#endif
      return nullptr;
    case Isa::kNeon:
#if defined(DLKV_HAVE_NEON)
      return &neon_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void set_isa(Isa isa) {
  const KernelTable* t = kernels_for(isa);
  if (t == nullptr) {
    throw std::invalid_argument("SIMD kernels unavailable: " + std::string(isa_name(isa)));
  }
  active().store(t, std::memory_order_release);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

}  // namespace dlkv::simd
