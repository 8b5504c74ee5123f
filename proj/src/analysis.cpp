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

#include "dlkv/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dlkv/error.hpp"
#include "dlkv/linalg.hpp"

namespace dlkv {
namespace {

std::vector<WordId> top_words(std::size_t n, const auto& count_of) {
  std::vector<WordId> ids(n == 0 ? 0 : count_of.size());
  std::iota(ids.begin(), ids.end(), WordId{0});
  std::stable_sort(ids.begin(), ids.end(), [&](WordId a, WordId b) {
    return count_of[a] > count_of[b];
  });
  ids.resize(std::min(n, ids.size()));
  std::sort(ids.begin(), ids.end());
  return ids;
}

SlotPairSelfSim pair_selfsim(const JointEmbeddingModel& model, std::size_t first,
                             std::span<const WordId> words) {
  const Vocabulary& vocab = model.vocab();
  SlotPairSelfSim out;
  out.first = first;
  out.second = first + 1;
  for (WordId w : words) {
    if (vocab.slot_count(w, first) == 0 || vocab.slot_count(w, first + 1) == 0) continue;
    out.words.push_back(w);
    out.cosines.push_back(
        linalg::cossim(model.embedding_of(w, first), model.embedding_of(w, first + 1)));
  }
  if (out.cosines.empty()) {
    throw DataError(fmt::format("no words occur in both slot {} and slot {}",
                                model.slots()[first].label, model.slots()[first + 1].label));
  }
  out.summary = summarize(out.cosines);
  return out;
}

}  // namespace

SelfSimSeries pairwise_selfsim_for(const JointEmbeddingModel& model,
                                   std::span<const WordId> words) {
  if (model.slot_count() < 2) throw std::invalid_argument("pairwise_selfsim needs >= 2 slots");
  std::vector<WordId> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  SelfSimSeries series;
  for (std::size_t t = 0; t + 1 < model.slot_count(); ++t) {
    series.pairs.push_back(pair_selfsim(model, t, sorted));
  }
  return series;
}

SelfSimSeries pairwise_selfsim(const JointEmbeddingModel& model, std::size_t top_n,
                               FrequencyRanking ranking) {
  const Vocabulary& vocab = model.vocab();
  if (top_n > vocab.size()) {
    throw std::invalid_argument(
        fmt::format("top_n {} exceeds vocabulary size {}", top_n, vocab.size()));
  }
  if (ranking == FrequencyRanking::kGlobal) {
    std::vector<std::uint64_t> counts(vocab.size());
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = vocab.global_count(static_cast<WordId>(i));
    const std::vector<WordId> words = top_words(top_n, counts);
    return pairwise_selfsim_for(model, words);
  }
  if (model.slot_count() < 2) throw std::invalid_argument("pairwise_selfsim needs >= 2 slots");
  SelfSimSeries series;
  for (std::size_t t = 0; t + 1 < model.slot_count(); ++t) {
    std::vector<std::uint64_t> counts(vocab.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto w = static_cast<WordId>(i);
      counts[i] = vocab.slot_count(w, t) + vocab.slot_count(w, t + 1);
    }
    const std::vector<WordId> words = top_words(top_n, counts);
    series.pairs.push_back(pair_selfsim(model, t, words));
  }
  return series;
}

std::vector<ChangePoint> detect_change_points(std::span<const double> medians,
                                              std::span<const int> years, std::size_t k) {
  if (medians.size() < 3) throw std::invalid_argument("change points need at least 3 pairs");
  if (years.size() != medians.size()) throw std::invalid_argument("years/medians size mismatch");
  std::vector<ChangePoint> minima;
  for (std::size_t i = 1; i + 1 < medians.size(); ++i) {
    if (medians[i] < medians[i - 1] && medians[i] < medians[i + 1]) {
      minima.push_back({i, years[i], 0.5 * (medians[i - 1] + medians[i + 1]) - medians[i]});
    }
  }
  std::stable_sort(minima.begin(), minima.end(), [](const ChangePoint& a, const ChangePoint& b) {
    return a.depth > b.depth;
  });
  if (minima.size() > k) minima.resize(k);
  return minima;
}

std::vector<ChangePoint> detect_change_points(const SelfSimSeries& series,
                                              const TimeSlotTable& slots, std::size_t k) {
  std::vector<double> medians;
  std::vector<int> years;
  for (const SlotPairSelfSim& p : series.pairs) {
    medians.push_back(p.summary.median);
    years.push_back(slots[p.second].start);
  }
  return detect_change_points(medians, years, k);
}

TotalSelfSim total_selfsim(const JointEmbeddingModel& model, std::uint64_t min_per_slot,
                           const StopwordSet& stopwords) {
  const Vocabulary& vocab = model.vocab();
  const TimeSlotTable& slots = model.slots();
  const std::size_t T = slots.size();

  TotalSelfSim out;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto w = static_cast<WordId>(i);
    if (stopwords.contains(vocab.word(w))) continue;
    if (!vocab.in_all_slots(w, min_per_slot)) continue;
    out.words.push_back(w);
    out.global_counts.push_back(vocab.global_count(w));
  }
  if (out.words.empty()) {
    throw DataError(fmt::format(
        "no eligible words: none reaches {} occurrences in every slot outside the stopwords",
        min_per_slot));
  }

  std::map<int, std::size_t> column;
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t j = i + 1; j < T; ++j) column.emplace(std::abs(slots[j].start - slots[i].start), 0);
  }
  for (auto& [dist, col] : column) {
    col = out.distances.size();
    out.distances.push_back(dist);
  }

  out.mean_cosine = MatrixD(out.words.size(), out.distances.size());
  std::vector<std::size_t> per_bucket(out.distances.size());
  for (std::size_t r = 0; r < out.words.size(); ++r) {
    const WordId w = out.words[r];
    std::vector<std::vector<float>> vecs(T);
    for (std::size_t t = 0; t < T; ++t) vecs[t] = model.embedding_of(w, t);
    std::fill(per_bucket.begin(), per_bucket.end(), 0);
    for (std::size_t i = 0; i < T; ++i) {
      for (std::size_t j = i + 1; j < T; ++j) {
        const std::size_t c = column.at(std::abs(slots[j].start - slots[i].start));
        out.mean_cosine(r, c) += linalg::cossim(vecs[i], vecs[j]);
        ++per_bucket[c];
      }
    }
    for (std::size_t c = 0; c < out.distances.size(); ++c) {
      out.mean_cosine(r, c) /= static_cast<double>(per_bucket[c]);
    }
  }

  std::vector<double> column_values(out.words.size());
  for (std::size_t c = 0; c < out.distances.size(); ++c) {
    for (std::size_t r = 0; r < out.words.size(); ++r) column_values[r] = out.mean_cosine(r, c);
    out.per_distance.push_back(summarize(column_values));
  }
  return out;
}

FrequencyBands frequency_bands(const TotalSelfSim& total) {
  const std::size_t n = total.words.size();
  if (n < 2) throw std::invalid_argument("frequency bands need at least 2 words");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (total.global_counts[a] != total.global_counts[b]) {
      return total.global_counts[a] < total.global_counts[b];
    }
    return total.words[a] < total.words[b];
  });
  FrequencyBands out;
  out.band.assign(n, Band::kHigh);
  const std::size_t low_size = (n + 1) / 2;
  for (std::size_t i = 0; i < low_size; ++i) out.band[order[i]] = Band::kLow;

  std::vector<double> low_vals;
  std::vector<double> high_vals;
  for (std::size_t c = 0; c < total.distances.size(); ++c) {
    low_vals.clear();
    high_vals.clear();
    for (std::size_t r = 0; r < n; ++r) {
      (out.band[r] == Band::kLow ? low_vals : high_vals).push_back(total.mean_cosine(r, c));
    }
    out.low.push_back(summarize(low_vals));
    out.high.push_back(summarize(high_vals));
  }
  return out;
}

LinearFit linearity_fit(const TotalSelfSim& total) {
  if (total.distances.size() < 3) {
    throw std::invalid_argument("linearity fit needs at least 3 distinct distances");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t c = 0; c < total.distances.size(); ++c) {
    x.push_back(static_cast<double>(total.distances[c]));
    y.push_back(total.per_distance[c].mean);
  }
  return least_squares(x, y);
}

}  // namespace dlkv
