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

namespace dlkv {

// Box-plot statistics; whiskers at the 5th and 95th percentiles.
struct DistributionSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  double mean = 0.0;
  std::size_t n = 0;
};

// Linear interpolation between closest ranks: position p * (n - 1) in the
// sorted sample, p in [0, 1]. `sorted` must be ascending and non-empty;
// throws std::invalid_argument otherwise.
double percentile_sorted(std::span<const double> sorted, double p);

// Throws std::invalid_argument on an empty sample.
DistributionSummary summarize(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept. r_squared is 0 when y has
// no variance. Throws std::invalid_argument if x has no variance or the sizes
// differ.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace dlkv
