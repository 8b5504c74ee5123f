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

#include "dlkv/vocab.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dlkv/error.hpp"

namespace dlkv {

Vocabulary Vocabulary::build(std::span<const Stanza> stanzas, const SlotAssignment& assignment,
                             std::uint64_t min_count) {
  const std::size_t slots = assignment.documents.size();
  struct Counts {
    std::uint64_t global = 0;
    std::vector<std::uint64_t> per_slot;
  };
  std::unordered_map<std::string, Counts> counts;
  for (std::size_t i : assignment.in_range) {
    for (const std::string& tok : stanzas[i].tokens) ++counts[tok].global;
  }
  for (std::size_t t = 0; t < slots; ++t) {
    for (std::size_t i : assignment.documents[t]) {
      for (const std::string& tok : stanzas[i].tokens) {
        Counts& c = counts[tok];
        if (c.per_slot.empty()) c.per_slot.assign(slots, 0);
        ++c.per_slot[t];
      }
    }
  }

  std::vector<std::pair<std::string, const Counts*>> kept;
  for (const auto& [word, c] : counts) {
    if (c.global >= min_count) kept.emplace_back(word, &c);
  }
  if (kept.empty()) {
    throw DataError(fmt::format("empty vocabulary (no word reaches min_count {})", min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second->global != b.second->global) return a.second->global > b.second->global;
    return a.first < b.first;
  });

  std::vector<std::string> words;
  std::vector<std::uint64_t> global;
  std::vector<std::uint64_t> per_slot;
  words.reserve(kept.size());
  global.reserve(kept.size());
  per_slot.reserve(kept.size() * slots);
  for (const auto& [word, c] : kept) {
    words.push_back(word);
    global.push_back(c->global);
    per_slot.insert(per_slot.end(), c->per_slot.begin(), c->per_slot.end());
  }
  return Vocabulary(std::move(words), std::move(global), slots, std::move(per_slot));
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> global_counts,
                       std::size_t slot_count, std::vector<std::uint64_t> slot_counts)
    : words_(std::move(words)),
      global_counts_(std::move(global_counts)),
      slot_count_(slot_count),
      slot_counts_(std::move(slot_counts)) {
  if (words_.size() != global_counts_.size()) {
    throw std::invalid_argument("vocabulary: words and counts differ in length");
  }
  if (!slot_counts_.empty() && slot_counts_.size() != words_.size() * slot_count_) {
    throw std::invalid_argument("vocabulary: per-slot count table has wrong size");
  }
  index_words();
}

void Vocabulary::index_words() {
  index_.clear();
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<WordId>(i)).second) {
      throw std::invalid_argument(fmt::format("vocabulary: duplicate word '{}'", words_[i]));
    }
  }
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::at(std::string_view word) const {
  if (auto id = find(word)) return *id;
  throw std::invalid_argument(fmt::format("word not in vocabulary: '{}'", word));
}

void Vocabulary::require_slot_counts() const {
  if (!has_slot_counts()) throw DataError("per-slot word counts are not available");
}

std::uint64_t Vocabulary::slot_count(WordId id, std::size_t slot) const {
  require_slot_counts();
  return slot_counts_[static_cast<std::size_t>(id) * slot_count_ + slot];
}

std::uint64_t Vocabulary::slot_total(std::size_t slot) const {
  require_slot_counts();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) total += slot_counts_[i * slot_count_ + slot];
  return total;
}

bool Vocabulary::in_all_slots(WordId id, std::uint64_t threshold) const {
  for (std::size_t t = 0; t < slot_count_; ++t) {
    if (slot_count(id, t) < threshold) return false;
  }
  return true;
}

std::vector<WordId> Vocabulary::all_slot_words(std::uint64_t threshold) const {
  std::vector<WordId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (in_all_slots(static_cast<WordId>(i), threshold)) out.push_back(static_cast<WordId>(i));
  }
  return out;
}

}  // namespace dlkv
