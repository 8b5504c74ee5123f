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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlkv/matrix.hpp"

namespace dlkv::linalg {

// (a . b) / (|a| |b|), clamped to [-1, 1]. Throws std::domain_error if either
// vector has zero norm and std::invalid_argument on a length mismatch.
double cossim(std::span<const float> a, std::span<const float> b);
double cossim(std::span<const double> a, std::span<const double> b);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  MatrixD vectors;             // row i is the unit eigenvector of values[i]
  int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// `tolerance` (scaled by the matrix norm when that exceeds 1).
SymmetricEigen jacobi_eigen(const MatrixD& symmetric, double tolerance = 1e-12,
                            int max_sweeps = 100);

struct PcaResult {
  std::vector<double> mean;                      // p
  MatrixD components;                            // q x p, orthonormal rows
  std::vector<double> eigenvalues;               // q, covariance eigenvalues
  std::vector<double> explained_variance_ratio;  // q
  MatrixD projections;                           // n x q
  // Zero total variance: ratios are all 0 and components are an arbitrary
  // orthonormal set.
  bool degenerate = false;
};

// Principal components of the rows of X (n x p). Columns are centered, the
// covariance uses divisor n-1, and each component is signed so that its
// largest-magnitude entry is positive. Requires n >= 2 and
// 1 <= q <= min(n-1, p); throws std::invalid_argument otherwise.
PcaResult pca(const MatrixD& x, std::size_t q);

}  // namespace dlkv::linalg
