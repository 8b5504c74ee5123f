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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dlkv/corpus.hpp"
#include "dlkv/slots.hpp"

namespace dlkv {

using WordId = std::uint32_t;

// Words with global and per-slot occurrence counts. Indices are dense and
// ordered by descending global count, ties by word.
//
// global_count counts each in-range stanza once. Per-slot counts count a
// stanza in every slot it was assigned to, so in sliding mode they sum to
// more than global_count.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Counts from a slot assignment; words below min_count are excluded.
  // Throws DataError if nothing survives.
  static Vocabulary build(std::span<const Stanza> stanzas, const SlotAssignment& assignment,
                          std::uint64_t min_count);

  // From stored parts. `slot_counts` is |V| x slots row-major, or empty when
  // per-slot counts are unknown.
  Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> global_counts,
             std::size_t slot_count, std::vector<std::uint64_t> slot_counts);

  std::size_t size() const { return words_.size(); }
  std::size_t slot_count() const { return slot_count_; }
  bool has_slot_counts() const { return !slot_counts_.empty(); }

  std::optional<WordId> find(std::string_view word) const;
  // Throws std::invalid_argument for unknown words.
  WordId at(std::string_view word) const;

  const std::string& word(WordId id) const { return words_[id]; }
  std::span<const std::string> words() const { return words_; }
  std::uint64_t global_count(WordId id) const { return global_counts_[id]; }
  // Throws DataError when per-slot counts are unknown.
  std::uint64_t slot_count(WordId id, std::size_t slot) const;
  std::uint64_t slot_total(std::size_t slot) const;
  std::span<const std::uint64_t> slot_counts() const { return slot_counts_; }

  // At least `threshold` occurrences in every slot.
  bool in_all_slots(WordId id, std::uint64_t threshold = kAllSlotThreshold) const;
  std::vector<WordId> all_slot_words(std::uint64_t threshold = kAllSlotThreshold) const;

  static constexpr std::uint64_t kAllSlotThreshold = 50;

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && global_counts_ == other.global_counts_ &&
           slot_count_ == other.slot_count_ && slot_counts_ == other.slot_counts_;
  }

 private:
  void index_words();
  void require_slot_counts() const;

  std::vector<std::string> words_;
  std::vector<std::uint64_t> global_counts_;
  std::size_t slot_count_ = 0;
  std::vector<std::uint64_t> slot_counts_;
  std::unordered_map<std::string, WordId> index_;
};

}  // namespace dlkv
