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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "dlkv/random.hpp"
#include "dlkv/simd/kernels.hpp"

using namespace dlkv;
using namespace dlkv::simd;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (const KernelTable* k = kernels_for(isa)) out.push_back(k);
  }
  return out;
}

template <typename T>
std::vector<T> random_vec(Rng& rng, std::size_t n) {
  std::vector<T> v(n);
  for (T& x : v) x = static_cast<T>(rng.uniform(-1.0, 1.0));
  return v;
}

// Float sums of up to n terms in f64: error well below 1e-12 relative to the
// sum of magnitudes.
void check_close(double got, double want, double scale) {
  CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, scale));
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(kernels_for(Isa::kScalar) == &scalar_kernels());
  CHECK(isa_name(Isa::kScalar) == "scalar");
  CHECK(kernels().dot != nullptr);
}

TEST_CASE("scalar kernels compute their definitions") {
  const KernelTable& k = scalar_kernels();
  const float a[] = {1, 2, 3};
  const float b[] = {4, 5, 6};
  const double u[] = {0.5, -1, 2};
  CHECK(k.dot(a, b, 3) == 32.0);
  CHECK(k.dot_mixed(u, b, 3) == 9.0);
  double out[3];
  k.add_widen(a, b, out, 3);
  CHECK(out[2] == 9.0);
  float y[] = {1, 1, 1};
  k.axpy_narrow(2.0, u, y, 3);
  CHECK(y[0] == 2.0f);
  CHECK(y[1] == -1.0f);
  double yw[] = {0, 0, 0};
  k.axpy_widen(-1.0, a, yw, 3);
  CHECK(yw[2] == -3.0);
}

TEST_CASE("vector kernels match scalar kernels") {
  const KernelTable& ref = scalar_kernels();
  const auto tables = vector_tables();
  if (tables.empty()) MESSAGE("no vector ISA compiled in or supported; equivalence trivially holds");
  Rng rng(7);
  for (const KernelTable* k : tables) {
    CAPTURE(isa_name(k->isa));
    for (std::size_t n : {0, 1, 3, 4, 7, 8, 9, 15, 16, 17, 31, 33, 100, 257}) {
      CAPTURE(n);
      const auto a = random_vec<float>(rng, n);
      const auto b = random_vec<float>(rng, n);
      const auto u = random_vec<double>(rng, n);
      const double alpha = rng.uniform(-2.0, 2.0);

      check_close(k->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), double(n));
      check_close(k->dot_mixed(u.data(), b.data(), n), ref.dot_mixed(u.data(), b.data(), n),
                  double(n));

      std::vector<double> o1(n), o2(n);
      k->add_widen(a.data(), b.data(), o1.data(), n);
      ref.add_widen(a.data(), b.data(), o2.data(), n);
      CHECK(o1 == o2);

      std::vector<float> y1 = a, y2 = a;
      k->axpy_narrow(alpha, u.data(), y1.data(), n);
      ref.axpy_narrow(alpha, u.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        // One f32 rounding each; fused and unfused f64 can differ by one ulp.
        CHECK(std::abs(y1[i] - y2[i]) <= std::nextafter(std::abs(y2[i]), 10.0f) - std::abs(y2[i]));
      }

      std::vector<double> w1 = u, w2 = u;
      k->axpy_widen(alpha, a.data(), w1.data(), n);
      ref.axpy_widen(alpha, a.data(), w2.data(), n);
      for (std::size_t i = 0; i < n; ++i) check_close(w1[i], w2[i], 1.0);
    }
  }
}

TEST_CASE("set_isa switches the active table") {
  const Isa before = kernels().isa;
  set_isa(Isa::kScalar);
  CHECK(kernels().isa == Isa::kScalar);
  for (const KernelTable* k : vector_tables()) {
    set_isa(k->isa);
    CHECK(kernels().isa == k->isa);
  }
  set_isa(before);
}
