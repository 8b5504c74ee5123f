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

// Models with hand-set vectors for analysis tests.

#pragma once

#include <string>
#include <vector>

#include "dlkv/slots.hpp"
#include "dlkv/trainer.hpp"

namespace dlkv::testing {

struct WordSpec {
  std::string word;
  std::vector<std::uint64_t> counts;  // per slot
};

// Main rows are zero; set per-slot vectors with set_vector.
inline JointEmbeddingModel manual_model(const std::vector<WordSpec>& words, std::size_t dim,
                                        TimeSlotTable slots) {
  std::vector<std::string> names;
  std::vector<std::uint64_t> global;
  std::vector<std::uint64_t> per_slot;
  for (const WordSpec& w : words) {
    names.push_back(w.word);
    std::uint64_t g = 0;
    for (std::uint64_t c : w.counts) g += c;
    global.push_back(g);
    per_slot.insert(per_slot.end(), w.counts.begin(), w.counts.end());
  }
  const std::size_t t = slots.size();
  return JointEmbeddingModel(Vocabulary(names, global, t, per_slot), std::move(slots), dim);
}

inline TimeSlotTable fixed_slots(std::size_t n) {
  return build_slots(1600, 1600 + 50 * static_cast<int>(n), 50, 50, false);
}

// Puts v into the slot row so embedding_of(word, slot) == v (main is zero).
inline void set_vector(JointEmbeddingModel& m, WordId w, std::size_t slot,
                       const std::vector<float>& v) {
  auto row = m.params().deltas[slot].row(w);
  std::copy(v.begin(), v.end(), row.begin());
}

inline void set_main(JointEmbeddingModel& m, WordId w, const std::vector<float>& v) {
  auto row = m.params().main.row(w);
  std::copy(v.begin(), v.end(), row.begin());
}

}  // namespace dlkv::testing
