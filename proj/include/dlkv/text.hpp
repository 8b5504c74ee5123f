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

// UTF-8 text helpers for the tokenizer. Case folding and the punctuation and
// whitespace classes cover Latin, Greek and Cyrillic scripts, which is what
// historical German text needs; everything else passes through untouched.
// Invalid UTF-8 bytes are copied verbatim and never treated as separators.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dlkv::text {

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view s);

// Split on Unicode whitespace, strip leading/trailing punctuation from each
// piece, lowercase. Pieces that are all punctuation vanish.
std::vector<std::string> tokenize(std::string_view line);

// Dedup key for a first line: lowercase, all punctuation removed, runs of
// whitespace collapsed to one space, trimmed.
std::string first_line_key(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace dlkv::text
