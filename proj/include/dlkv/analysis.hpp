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

// Self-similarity studies over a trained joint model.
//
// Self-similarity of w between slots i and j is cossim(w(t_i), w(t_j)).
// A word is only compared across slots where it actually occurs; it is never
// imputed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dlkv/corpus.hpp"
#include "dlkv/matrix.hpp"
#include "dlkv/stats.hpp"
#include "dlkv/trainer.hpp"

namespace dlkv {

enum class FrequencyRanking {
  kGlobal,   // top-n by corpus-wide count
  kPerSlot,  // top-n by combined count in the two slots of each pair
};

struct SlotPairSelfSim {
  std::size_t first = 0;  // slot index; second == first + 1
  std::size_t second = 0;
  DistributionSummary summary;
  std::vector<WordId> words;  // ascending
  std::vector<double> cosines;
};

struct SelfSimSeries {
  std::vector<SlotPairSelfSim> pairs;
};

// Adjacent-slot self-similarity of the top_n most frequent words. Words with
// zero count in either slot of a pair are skipped for that pair. Throws
// std::invalid_argument if top_n > |V| and DataError if a pair ends up with no
// words.
SelfSimSeries pairwise_selfsim(const JointEmbeddingModel& model, std::size_t top_n,
                               FrequencyRanking ranking = FrequencyRanking::kGlobal);

// Same, over an explicit word set.
SelfSimSeries pairwise_selfsim_for(const JointEmbeddingModel& model,
                                   std::span<const WordId> words);

struct ChangePoint {
  std::size_t pair_index = 0;
  int year = 0;  // start year of the later slot of the pair
  double depth = 0.0;
};

// The k deepest strict interior local minima of the per-pair medians.
// depth = mean(neighbor medians) - median. Ties go to the earlier pair.
// Throws std::invalid_argument with fewer than 3 pairs.
std::vector<ChangePoint> detect_change_points(const SelfSimSeries& series,
                                              const TimeSlotTable& slots, std::size_t k);
std::vector<ChangePoint> detect_change_points(std::span<const double> medians,
                                              std::span<const int> years, std::size_t k);

struct TotalSelfSim {
  std::vector<int> distances;                 // ascending, in years
  std::vector<WordId> words;                  // eligible words, ascending
  std::vector<std::uint64_t> global_counts;   // parallel to words
  MatrixD mean_cosine;                        // words x distances
  std::vector<DistributionSummary> per_distance;
};

// Eligible words: not a stopword and at least min_per_slot occurrences in
// every slot. For every unordered slot pair the cosine is bucketed by the
// distance between slot start years and averaged per word. Throws DataError
// when no word is eligible.
TotalSelfSim total_selfsim(const JointEmbeddingModel& model, std::uint64_t min_per_slot,
                           const StopwordSet& stopwords);

enum class Band { kLow, kHigh };

struct FrequencyBands {
  std::vector<Band> band;  // parallel to TotalSelfSim::words
  std::vector<DistributionSummary> low;   // per distance
  std::vector<DistributionSummary> high;  // per distance
};

// Lower half by global count is low (ties by vocabulary index; the middle
// word of an odd count goes low). Throws std::invalid_argument with fewer
// than 2 words.
FrequencyBands frequency_bands(const TotalSelfSim& total);

// OLS of the per-distance mean cosine on distance. Throws
// std::invalid_argument with fewer than 3 distances.
LinearFit linearity_fit(const TotalSelfSim& total);

}  // namespace dlkv
