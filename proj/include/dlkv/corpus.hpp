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

// Stanza records: JSON Lines ingestion, first-line deduplication and
// lemmatizing normalization.
//
// Input records look like
//   {"id": "s1", "poem_id": "p1", "author": "A", "year": 1750, "lines": [...]}
// Unknown keys are ignored. A record without a year is dropped and counted;
// a record that is not valid JSON or lacks id/lines is malformed.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dlkv {

inline constexpr int kMinYear = 1000;
inline constexpr int kMaxYear = 2100;

struct Stanza {
  std::string id;
  std::string poem_id;
  std::string author;
  int year = 0;
  std::vector<std::string> lines;
  // Lemmas, filled by normalize().
  std::vector<std::string> tokens;

  bool operator==(const Stanza&) const = default;
};

struct IngestOptions {
  // Abort with DataError on the first malformed record instead of skipping.
  bool strict = false;
};

struct IngestReport {
  std::size_t records = 0;  // non-blank lines seen
  std::size_t malformed = 0;
  std::size_t missing_year = 0;
  std::size_t year_out_of_range = 0;

  std::size_t dropped() const { return malformed + missing_year + year_out_of_range; }
};

struct IngestResult {
  std::vector<Stanza> stanzas;
  IngestReport report;
};

// Throws DataError if the file cannot be opened.
IngestResult ingest(const std::filesystem::path& path, IngestOptions options = {});
IngestResult ingest(std::istream& in, IngestOptions options = {},
                    std::string_view source = "<stream>");

struct DedupResult {
  std::vector<Stanza> stanzas;
  std::size_t removed = 0;
};

// Keeps, per first-line key, the stanza with the earliest year (ties: smallest
// id). Survivors keep their input order. Stanzas without lines are kept.
DedupResult dedup_first_line(std::vector<Stanza> stanzas);

// Token to lemma. Keys are stored lowercased.
using LemmaMap = std::unordered_map<std::string, std::string>;
using StopwordSet = std::unordered_set<std::string>;

// TSV token<TAB>lemma; later duplicates override earlier ones. Both columns
// are lowercased so lookups match tokenizer output.
LemmaMap load_lemma_map(const std::filesystem::path& path);
LemmaMap parse_lemma_map(std::istream& in);

// One word per line; '#' lines and blank lines ignored; lowercased.
StopwordSet load_stopwords(const std::filesystem::path& path);
StopwordSet parse_stopwords(std::istream& in);

struct NormalizeResult {
  std::vector<Stanza> stanzas;
  std::size_t dropped_empty = 0;
};

// Tokenizes every line and maps tokens through the lemma table. Stanzas
// that end up with no tokens are dropped with a logged reason.
NormalizeResult normalize(std::vector<Stanza> stanzas, const LemmaMap& lemmas);

struct CorpusStats {
  std::size_t tokens = 0;
  std::size_t lines = 0;
  std::size_t stanzas = 0;
  std::size_t poems = 0;
  std::size_t authors = 0;
};

CorpusStats corpus_stats(std::span<const Stanza> stanzas);

// Normalized cache: the input record format plus a "tokens" array.
void write_normalized(const std::filesystem::path& path, std::span<const Stanza> stanzas);
void write_jsonl(std::ostream& out, std::span<const Stanza> stanzas, bool with_tokens);
// Throws DataError when a record lacks "tokens" (i.e. the file was never
// produced by write_normalized).
std::vector<Stanza> load_normalized(const std::filesystem::path& path);

}  // namespace dlkv
