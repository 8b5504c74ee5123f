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

// AArch64 only; NEON is baseline there so no runtime check is needed.

#include <arm_neon.h>

#include "dlkv/simd/kernels.hpp"

namespace dlkv::simd {
namespace {

double dot(const float* a, const float* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t va = vld1q_f32(a + i);
    const float32x4_t vb = vld1q_f32(b + i);
    acc0 = vfmaq_f64(acc0, vcvt_f64_f32(vget_low_f32(va)), vcvt_f64_f32(vget_low_f32(vb)));
    acc1 = vfmaq_f64(acc1, vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

double dot_mixed(const double* u, const float* c, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t vc = vld1q_f32(c + i);
    acc0 = vfmaq_f64(acc0, vld1q_f64(u + i), vcvt_f64_f32(vget_low_f32(vc)));
    acc1 = vfmaq_f64(acc1, vld1q_f64(u + i + 2), vcvt_high_f64_f32(vc));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += u[i] * static_cast<double>(c[i]);
  return acc;
}

void add_widen(const float* a, const float* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vaddq_f64(vcvt_f64_f32(vld1_f32(a + i)), vcvt_f64_f32(vld1_f32(b + i))));
  }
  for (; i < n; ++i) out[i] = static_cast<double>(a[i]) + static_cast<double>(b[i]);
}

void axpy_narrow(double alpha, const double* x, float* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vfmaq_f64(vcvt_f64_f32(vld1_f32(y + i)), va, vld1q_f64(x + i));
    vst1_f32(y + i, vcvt_f32_f64(r));
  }
  for (; i < n; ++i) {
    y[i] = static_cast<float>(static_cast<double>(y[i]) + alpha * x[i]);
  }
}

void axpy_widen(double alpha, const float* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vcvt_f64_f32(vld1_f32(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * static_cast<double>(x[i]);
}

}  // namespace

const KernelTable& neon_kernels() {
  static constexpr KernelTable table{Isa::kNeon, dot, dot_mixed, add_widen,
                                     axpy_narrow, axpy_widen};
  return table;
}

}  // namespace dlkv::simd
