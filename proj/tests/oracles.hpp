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

// Reference computations written independently of the library, shared by the
// unit tests and the acceptance runner.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dlkv/matrix.hpp"
#include "dlkv/trainer.hpp"

namespace dlkv::oracle {

// Number of eigenvalues of symmetric `a` below x: the count of negative
// pivots of the LDL^T factorization of (a - xI), i.e. the sign changes in the
// Sturm sequence of leading principal minors of the characteristic
// polynomial. Uses long double with symmetric pivoting fallback by a tiny
// shift when a pivot vanishes.
inline std::size_t eigen_count_below(const MatrixD& a, long double x) {
  const std::size_t n = a.rows();
  std::vector<long double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j) - (i == j ? x : 0.0L);
  }
  std::size_t negatives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    long double pivot = m[k * n + k];
    if (pivot == 0.0L) pivot = -1e-300L;
    if (pivot < 0.0L) ++negatives;
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i * n + k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return negatives;
}

// All eigenvalues of symmetric `a`, descending, by bisection on the count.
inline std::vector<double> eigenvalues_by_bisection(const MatrixD& a, double tol = 1e-13) {
  const std::size_t n = a.rows();
  long double radius = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double r = 0.0L;
    for (std::size_t j = 0; j < n; ++j) r += std::fabs(static_cast<long double>(a(i, j)));
    radius = std::max(radius, r);
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    // k-th smallest: smallest x with count_below(x) >= k + 1.
    long double lo = -radius - 1.0L;
    long double hi = radius + 1.0L;
    while (hi - lo > tol * std::max<long double>(1.0L, std::fabs(hi))) {
      const long double mid = 0.5L * (lo + hi);
      if (eigen_count_below(a, mid) >= k + 1) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.push_back(static_cast<double>(0.5L * (lo + hi)));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline long double log_sigmoid(long double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Joint skip-gram negative-sampling loss, evaluated directly from the
// definition: u = main[w] + delta_t[w];
// loss = -log s(u.C[c]) - sum_k log s(-u.C[n_k]).
inline long double joint_sgns_loss(const JointParams<double>& p,
                                   const std::vector<PairSample>& batch) {
  long double total = 0.0L;
  const std::size_t d = p.main.cols();
  for (const PairSample& s : batch) {
    std::vector<long double> u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = p.main(s.target, i) + p.deltas[s.slot](s.target, i);
    auto dot = [&](WordId c) {
      long double acc = 0.0L;
      for (std::size_t i = 0; i < d; ++i) acc += u[i] * p.context(c, i);
      return acc;
    };
    total -= log_sigmoid(dot(s.context));
    for (WordId n : s.negatives) total -= log_sigmoid(-dot(n));
  }
  return total;
}

// Central finite-difference gradient of joint_sgns_loss for every parameter.
inline JointParams<double> finite_difference_gradient(JointParams<double> p,
                                                      const std::vector<PairSample>& batch,
                                                      double h) {
  JointParams<double> g(p.main.rows(), p.main.cols(), p.deltas.size());
  auto sweep = [&](MatrixD& m, MatrixD& gm) {
    for (std::size_t i = 0; i < m.data().size(); ++i) {
      const double keep = m.data()[i];
      m.data()[i] = keep + h;
      const long double up = joint_sgns_loss(p, batch);
      m.data()[i] = keep - h;
      const long double down = joint_sgns_loss(p, batch);
      m.data()[i] = keep;
      gm.data()[i] = static_cast<double>((up - down) / (2.0L * h));
    }
  };
  sweep(p.main, g.main);
  for (std::size_t t = 0; t < p.deltas.size(); ++t) sweep(p.deltas[t], g.deltas[t]);
  sweep(p.context, g.context);
  return g;
}

// Largest |a - b| / max(|a|, |b|) over all parameters. Entries where both
// gradients are below 1e-7 in magnitude are measured against 1e-7.
inline double max_relative_error(const JointParams<double>& a, const JointParams<double>& b) {
  double worst = 0.0;
  auto visit = [&](const MatrixD& x, const MatrixD& y) {
    for (std::size_t i = 0; i < x.data().size(); ++i) {
      const double denom = std::max({std::abs(x.data()[i]), std::abs(y.data()[i]), 1e-7});
      worst = std::max(worst, std::abs(x.data()[i] - y.data()[i]) / denom);
    }
  };
  visit(a.main, b.main);
  for (std::size_t t = 0; t < a.deltas.size(); ++t) visit(a.deltas[t], b.deltas[t]);
  visit(a.context, b.context);
  return worst;
}

}  // namespace dlkv::oracle
