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

// Model file layout, all little-endian:
//
//   "DLKV"  u32 version  u32 dim  u32 |V|  u32 slots
//   slots x (i32 start, i32 end)
//   |V| x (u32 byte length, UTF-8 word, u64 global count), index order
//   main, delta_0 .. delta_{slots-1}, context: |V| x dim f32, row-major
//
// followed by an optional per-slot count section that the analyses need:
//
//   "SLTC"  i32 window_years  i32 step_years  |V| x slots u64 (row-major)
//
// Readers that stop after the context matrix see a valid model.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "dlkv/trainer.hpp"

namespace dlkv {

inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const JointEmbeddingModel& model, const std::filesystem::path& path);
void save_model(const JointEmbeddingModel& model, std::ostream& out);

// Throws DataError for a wrong magic ("not a model file"), unsupported
// version, truncation or inconsistent sizes.
JointEmbeddingModel load_model(const std::filesystem::path& path);
JointEmbeddingModel load_model(std::istream& in);

}  // namespace dlkv
