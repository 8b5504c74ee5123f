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

#include "dlkv/linalg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dlkv/error.hpp"
#include "dlkv/simd/kernels.hpp"

namespace dlkv::linalg {
namespace {

double finish_cosine(double dot, double aa, double bb) {
  if (!(aa > 0.0) || !(bb > 0.0)) throw std::domain_error("cossim of a zero-norm vector");
  const double c = dot / (std::sqrt(aa) * std::sqrt(bb));
  if (!std::isfinite(c)) throw NumericError("cossim produced a non-finite value");
  return std::clamp(c, -1.0, 1.0);
}

double off_diagonal_norm(const MatrixD& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

double frobenius(const MatrixD& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

// Index of the first entry whose magnitude equals the maximum (to rounding).
std::size_t dominant_index(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  const double slack = 1e-12 * std::max(1.0, best);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= best - slack) return i;
  }
  return 0;
}

}  // namespace

double cossim(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cossim: length mismatch");
  const auto& k = simd::kernels();
  return finish_cosine(k.dot(a.data(), b.data(), a.size()), k.dot(a.data(), a.data(), a.size()),
                       k.dot(b.data(), b.data(), b.size()));
}

double cossim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cossim: length mismatch");
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return finish_cosine(ab, aa, bb);
}

SymmetricEigen jacobi_eigen(const MatrixD& symmetric, double tolerance, int max_sweeps) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix not square");
  for (double v : symmetric.data()) {
    if (!std::isfinite(v)) throw NumericError("jacobi_eigen: non-finite input");
  }
  MatrixD a = symmetric;
  MatrixD v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double threshold = tolerance * std::max(1.0, frobenius(a));
  int sweeps = 0;
  while (off_diagonal_norm(a) >= threshold) {
    if (sweeps == max_sweeps) {
      throw NumericError(fmt::format("jacobi_eigen: no convergence after {} sweeps", sweeps));
    }
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        // A <- J^T A J with J the (p, q) plane rotation.
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymmetricEigen out;
  out.sweeps = sweeps;
  out.values.resize(n);
  out.vectors = MatrixD(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    out.values[r] = a(order[r], order[r]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v(k, order[r]);
  }
  return out;
}

PcaResult pca(const MatrixD& x, std::size_t q) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2) throw std::invalid_argument("pca: need at least 2 rows");
  if (q < 1 || q > std::min(n - 1, p)) {
    throw std::invalid_argument(
        fmt::format("pca: component count {} outside [1, {}]", q, std::min(n - 1, p)));
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw NumericError("pca: non-finite input");
  }

  PcaResult out;
  out.mean.assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) out.mean[j] += x(i, j);
  }
  for (double& m : out.mean) m /= static_cast<double>(n);

  MatrixD centered(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) centered(i, j) = x(i, j) - out.mean[j];
  }
  MatrixD cov(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += centered(i, j) * centered(i, k);
      s /= static_cast<double>(n - 1);
      cov(j, k) = s;
      cov(k, j) = s;
    }
  }

  double trace = 0.0;
  for (std::size_t j = 0; j < p; ++j) trace += cov(j, j);
  // Centering constant columns leaves rounding residue of order eps * |x|.
  double scale = 0.0;
  for (double v : x.data()) scale = std::max(scale, std::abs(v));
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * scale;
  const double variance_floor = static_cast<double>(p) * noise * noise;

  out.components = MatrixD(q, p);
  out.eigenvalues.assign(q, 0.0);
  out.explained_variance_ratio.assign(q, 0.0);
  if (!(trace > variance_floor)) {
    out.degenerate = true;
    for (std::size_t r = 0; r < q; ++r) out.components(r, r) = 1.0;
  } else {
    const SymmetricEigen eig = jacobi_eigen(cov);
    for (std::size_t r = 0; r < q; ++r) {
      auto row = eig.vectors.row(r);
      const double sign = row[dominant_index(row)] < 0.0 ? -1.0 : 1.0;
      for (std::size_t k = 0; k < p; ++k) out.components(r, k) = sign * row[k];
      out.eigenvalues[r] = eig.values[r];
      out.explained_variance_ratio[r] = std::clamp(eig.values[r] / trace, 0.0, 1.0);
    }
  }

  out.projections = MatrixD(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < q; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += centered(i, k) * out.components(r, k);
      out.projections(i, r) = s;
    }
  }
  return out;
}

}  // namespace dlkv::linalg
