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
#include <string>
#include <vector>

#include "dlkv/corpus.hpp"

namespace dlkv {

// Half-open year interval [start, end).
struct TimeSlot {
  int start = 0;
  int end = 0;
  std::string label;

  bool contains(int year) const { return year >= start && year < end; }
  bool operator==(const TimeSlot&) const = default;
};

struct TimeSlotTable {
  std::vector<TimeSlot> slots;
  int step_years = 0;
  int window_years = 0;

  std::size_t size() const { return slots.size(); }
  bool sliding() const { return step_years < window_years; }
  const TimeSlot& operator[](std::size_t i) const { return slots[i]; }

  // Indices of all slots whose interval holds `year`, ascending.
  std::vector<std::size_t> slots_containing(int year) const;

  bool operator==(const TimeSlotTable&) const = default;
};

// Slots of `window_years` starting every `step_years` from `start`, as many as
// fit before `end`. A remainder shorter than a window widens the last slot so
// that [start, end) is covered. merge_first (fixed mode only) fuses the first
// two slots. Throws std::invalid_argument on bad parameters or fewer than two
// resulting slots.
TimeSlotTable build_slots(int start, int end, int window_years, int step_years,
                          bool merge_first);

// Rebuilds a table from stored intervals, checking ordering.
TimeSlotTable make_slot_table(std::vector<TimeSlot> slots, int window_years, int step_years);

std::string slot_label(int start, int end);

struct SlotAssignment {
  // documents[t] lists indices into the stanza array, in input order.
  std::vector<std::vector<std::size_t>> documents;
  std::size_t dropped = 0;
  // Stanzas that landed in at least one slot.
  std::vector<std::size_t> in_range;
};

SlotAssignment assign(std::span<const Stanza> stanzas, const TimeSlotTable& table);

}  // namespace dlkv
