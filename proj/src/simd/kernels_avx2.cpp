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

// Compiled with -mavx2 -mfma. Only reached through dispatch after a CPU check.

#include <immintrin.h>

#include "dlkv/simd/kernels.hpp"

namespace dlkv::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline __m256d widen4(const float* p) { return _mm256_cvtps_pd(_mm_loadu_ps(p)); }

double dot(const float* a, const float* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(widen4(a + i), widen4(b + i), acc0);
    acc1 = _mm256_fmadd_pd(widen4(a + i + 4), widen4(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(widen4(a + i), widen4(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

double dot_mixed(const double* u, const float* c, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(u + i), widen4(c + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(u + i + 4), widen4(c + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(u + i), widen4(c + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += u[i] * static_cast<double>(c[i]);
  return acc;
}

void add_widen(const float* a, const float* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(widen4(a + i), widen4(b + i)));
  }
  for (; i < n; ++i) out[i] = static_cast<double>(a[i]) + static_cast<double>(b[i]);
}

void axpy_narrow(double alpha, const double* x, float* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), widen4(y + i));
    _mm_storeu_ps(y + i, _mm256_cvtpd_ps(r));
  }
  for (; i < n; ++i) {
    y[i] = static_cast<float>(static_cast<double>(y[i]) + alpha * x[i]);
  }
}

void axpy_widen(double alpha, const float* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, widen4(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * static_cast<double>(x[i]);
}

}  // namespace

const KernelTable& avx2_kernels() {
  static constexpr KernelTable table{Isa::kAvx2, dot, dot_mixed, add_widen,
                                     axpy_narrow, axpy_widen};
  return table;
}

}  // namespace dlkv::simd
