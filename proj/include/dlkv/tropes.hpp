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

// Trope discovery: per-slot cosine trajectories of a target word against
// candidate words, PCA over the trajectories, and the candidates at each
// component extreme.
//
// After orientation, component 1's positive end holds stably high
// trajectories and component 2's positive end holds rising ones.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dlkv/linalg.hpp"
#include "dlkv/trainer.hpp"

namespace dlkv {

struct SimilarityTrajectory {
  WordId target = 0;
  WordId candidate = 0;
  std::vector<double> values;  // one per slot, imputed slots filled in
  std::vector<bool> imputed;
};

struct TrajectoryFilter {
  std::uint64_t min_global = 30;
  std::uint64_t min_per_slot = 2;
  // Slots below min_per_slot that a candidate may have; they are imputed.
  std::size_t max_missing = 1;
};

// Candidates in vocabulary order. Missing slots are filled by linear
// interpolation between the nearest present slots (nearest value at the
// edges). Throws std::invalid_argument if the target is unknown or absent
// from a slot, DataError if no candidate qualifies.
std::vector<SimilarityTrajectory> build_trajectories(const JointEmbeddingModel& model,
                                                     std::string_view target,
                                                     const TrajectoryFilter& filter = {});

// Fills values[i] where missing[i] is set. Present values are left untouched.
// Throws std::invalid_argument when nothing is present.
void impute_linear(std::span<double> values, const std::vector<bool>& missing);

struct ExtremeEntry {
  std::size_t row = 0;  // index into TropeReport::trajectories
  WordId candidate = 0;
  double projection = 0.0;
};

struct ComponentExtremes {
  std::vector<ExtremeEntry> positive;  // most positive first
  std::vector<ExtremeEntry> negative;  // most negative first
  bool orientation_undetermined = false;
};

struct TropeReport {
  std::vector<SimilarityTrajectory> trajectories;
  linalg::PcaResult pca;
  std::vector<ComponentExtremes> extremes;  // one per component
  std::size_t top_k = 0;
};

// PCA over the n x slots trajectory matrix and the top_k candidates at both
// ends of every component (fewer when n < 2 * top_k, so the ends never share
// a candidate). Requires at least q + 1 trajectories.
TropeReport trope_pca(std::vector<SimilarityTrajectory> trajectories, std::size_t q = 4,
                      std::size_t top_k = 25);

// Flips component 1 so its positive end has the higher mean trajectory value
// and component 2 so its positive end has the higher mean least-squares
// slope. A component whose ends cannot be told apart is flagged undetermined.
TropeReport orient_components(TropeReport report);

enum class TropeClass { kHigh, kLow, kRising, kFalling, kMixed };

std::string_view trope_class_name(TropeClass c);

// Every label whose component-extreme list contains the candidate, in the
// order high, low, rising, falling; {kMixed} if none. Throws
// std::invalid_argument for a candidate that is not in the report.
std::vector<TropeClass> classify_trajectory(const TropeReport& report, WordId candidate);

}  // namespace dlkv
