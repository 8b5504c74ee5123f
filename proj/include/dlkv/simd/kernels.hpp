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

// Inner-loop kernels for embedding rows. Rows are stored as f32; every
// reduction accumulates in f64.
//
// Each instruction set provides one KernelTable. The scalar table is the
// reference; vector tables must agree with it up to summation order. The
// active table is picked once per process from the CPU features, and can be
// pinned with DLKV_SIMD=scalar|avx2|neon or set_isa().

#pragma once

#include <cstddef>
#include <string_view>

namespace dlkv::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const float* a, const float* b, std::size_t n);
  // sum_i u[i] * c[i]
  double (*dot_mixed)(const double* u, const float* c, std::size_t n);
  // out[i] = a[i] + b[i]
  void (*add_widen)(const float* a, const float* b, double* out, std::size_t n);
  // y[i] += alpha * x[i], rounded to f32 once per element
  void (*axpy_narrow)(double alpha, const double* x, float* y, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy_widen)(double alpha, const float* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the ISA was not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

// Currently dispatched table.
const KernelTable& kernels();

// Pins dispatch. Throws std::invalid_argument if the ISA is unavailable.
void set_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace dlkv::simd
