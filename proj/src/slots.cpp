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

#include "dlkv/slots.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace dlkv {

std::string slot_label(int start, int end) { return fmt::format("{}-{}", start, end); }

std::vector<std::size_t> TimeSlotTable::slots_containing(int year) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].contains(year)) out.push_back(i);
    if (slots[i].start > year) break;
  }
  return out;
}

TimeSlotTable build_slots(int start, int end, int window_years, int step_years,
                          bool merge_first) {
  if (end <= start) throw std::invalid_argument("slot range: end must exceed start");
  if (window_years <= 0) throw std::invalid_argument("slot window must be positive");
  if (step_years <= 0 || step_years > window_years) {
    throw std::invalid_argument("slot step must be in [1, window]");
  }
  const bool fixed = step_years == window_years;
  if (merge_first && !fixed) {
    throw std::invalid_argument("merge-first applies to fixed slotting only");
  }

  TimeSlotTable table;
  table.step_years = step_years;
  table.window_years = window_years;
  for (int s = start; s + window_years <= end; s += step_years) {
    table.slots.push_back({s, s + window_years, {}});
  }
  if (!table.slots.empty() && table.slots.back().end < end) {
    table.slots.back().end = end;
  }
  if (merge_first && table.slots.size() >= 2) {
    table.slots[1].start = table.slots[0].start;
    table.slots.erase(table.slots.begin());
  }
  if (table.slots.size() < 2) {
    throw std::invalid_argument(fmt::format(
        "slotting [{}, {}) with window {} step {}{} yields fewer than 2 slots", start, end,
        window_years, step_years, merge_first ? " (merged)" : ""));
  }
  for (TimeSlot& slot : table.slots) slot.label = slot_label(slot.start, slot.end);
  return table;
}

TimeSlotTable make_slot_table(std::vector<TimeSlot> slots, int window_years, int step_years) {
  if (slots.size() < 2) throw std::invalid_argument("slot table needs at least 2 slots");
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].end <= slots[i].start) throw std::invalid_argument("empty slot interval");
    if (i > 0 && slots[i].start <= slots[i - 1].start) {
      throw std::invalid_argument("slot starts must be strictly increasing");
    }
    if (slots[i].label.empty()) slots[i].label = slot_label(slots[i].start, slots[i].end);
  }
  TimeSlotTable table;
  table.slots = std::move(slots);
  table.window_years = window_years;
  table.step_years = step_years;
  return table;
}

SlotAssignment assign(std::span<const Stanza> stanzas, const TimeSlotTable& table) {
  SlotAssignment out;
  out.documents.resize(table.size());
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    const auto hits = table.slots_containing(stanzas[i].year);
    if (hits.empty()) {
      ++out.dropped;
      continue;
    }
    out.in_range.push_back(i);
    for (std::size_t t : hits) out.documents[t].push_back(i);
  }
  return out;
}

}  // namespace dlkv
