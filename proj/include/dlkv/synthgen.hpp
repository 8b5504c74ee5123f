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

// Synthetic diachronic corpora with planted ground truth.
//
// The filler vocabulary is split into context clusters ("c<k>w<j>"), each a
// fixed multinomial over its words (weight of word j proportional to
// 1 / (j + 1)^cluster_skew; skew 0 is uniform). A planted word appears exactly
// count_per_slot times per slot, once per pseudo-stanza, surrounded by
// context words drawn from the cluster(s) its kind prescribes for that slot:
//
//   stable        clusters[0] in every slot
//   abrupt_shift  clusters[0] before shift_slot, clusters[1] from it on
//   linear_drift  each context token from clusters[1] with probability
//                 min(1, drift_rate * slot), else clusters[0]
//   wandering     one cluster per slot drawn from `clusters`
//
// The rest of each slot is filled with background stanzas drawn from a
// single random cluster. Years are uniform within a slot. First lines are
// unique across the corpus so deduplication removes nothing.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dlkv/corpus.hpp"

namespace dlkv {

enum class PlantKind { kStable, kAbruptShift, kLinearDrift, kWandering };

struct PlantedItem {
  std::string word;
  PlantKind kind = PlantKind::kStable;
  std::vector<std::size_t> clusters;
  std::size_t shift_slot = 0;  // abrupt_shift: first slot in the new cluster
  double drift_rate = 0.0;     // linear_drift; <= 0 means 1 / (slots - 1)
  std::size_t count_per_slot = 100;
};

struct SynthSpec {
  std::size_t slot_count = 6;
  int start_year = 1600;
  int slot_years = 50;
  std::size_t cluster_count = 20;
  std::size_t cluster_size = 10;
  double cluster_skew = 1.0;
  std::size_t tokens_per_slot = 50000;
  std::size_t stanza_tokens = 10;
  std::size_t lines_per_stanza = 2;
  std::vector<PlantedItem> planted;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument (including when tokens_per_slot cannot hold
  // the planted stanzas).
  void validate() const;
};

std::string filler_word(std::size_t cluster, std::size_t index);
std::string_view plant_kind_name(PlantKind kind);

std::vector<Stanza> generate(const SynthSpec& spec);

struct SynthTotals {
  std::size_t stanzas = 0;
  std::size_t tokens = 0;
  std::size_t lines = 0;
  std::size_t poems = 0;
  std::size_t authors = 0;
};

// What ingest should report for generate(spec).
SynthTotals synth_totals(const SynthSpec& spec);

// JSON mirror of SynthSpec, e.g.
//   {"slot_count": 6, "start_year": 1600, "slot_years": 50, "seed": 7,
//    "planted": [{"word": "herz", "kind": "abrupt_shift", "clusters": [0, 1],
//                 "shift_slot": 3, "count_per_slot": 300}]}
// Missing keys take the defaults above. Throws DataError on bad JSON or
// unknown kinds.
SynthSpec parse_synth_spec(std::string_view json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);
std::string synth_spec_to_json(const SynthSpec& spec);

}  // namespace dlkv
