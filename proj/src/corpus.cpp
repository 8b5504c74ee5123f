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

#include "dlkv/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <unordered_map>

#include "dlkv/error.hpp"
#include "dlkv/text.hpp"
#include "json.hpp"

namespace dlkv {
namespace {

using nlohmann::json;

enum class RecordStatus { kOk, kMalformed, kMissingYear, kYearOutOfRange };

struct ParsedRecord {
  RecordStatus status = RecordStatus::kOk;
  std::string reason;
  Stanza stanza;
  bool has_tokens = false;
};

bool read_string_array(const json& j, std::vector<std::string>& out) {
  if (!j.is_array()) return false;
  out.clear();
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) return false;
    out.push_back(e.get<std::string>());
  }
  return true;
}

bool read_optional_string(const json& obj, const char* key, std::string& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return true;
  if (!it->is_string()) return false;
  out = it->get<std::string>();
  return true;
}

ParsedRecord parse_record(std::string_view line) {
  ParsedRecord r;
  auto malformed = [&](std::string why) {
    r.status = RecordStatus::kMalformed;
    r.reason = std::move(why);
    return r;
  };
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) return malformed("invalid JSON");
  if (!obj.is_object()) return malformed("record is not an object");

  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string()) return malformed("missing string field 'id'");
  r.stanza.id = id->get<std::string>();

  auto lines = obj.find("lines");
  if (lines == obj.end() || !read_string_array(*lines, r.stanza.lines)) {
    return malformed("missing string array 'lines'");
  }
  if (!read_optional_string(obj, "poem_id", r.stanza.poem_id)) {
    return malformed("'poem_id' is not a string");
  }
  if (!read_optional_string(obj, "author", r.stanza.author)) {
    return malformed("'author' is not a string");
  }
  if (auto tokens = obj.find("tokens"); tokens != obj.end()) {
    if (!read_string_array(*tokens, r.stanza.tokens)) {
      return malformed("'tokens' is not a string array");
    }
    r.has_tokens = true;
  }

  auto year = obj.find("year");
  if (year == obj.end() || year->is_null()) {
    r.status = RecordStatus::kMissingYear;
    return r;
  }
  if (year->is_number_integer()) {
    const auto y = year->get<std::int64_t>();
    if (y < kMinYear || y > kMaxYear) {
      r.status = RecordStatus::kYearOutOfRange;
      return r;
    }
    r.stanza.year = static_cast<int>(y);
  } else if (year->is_number_float()) {
    const double y = year->get<double>();
    if (!std::isfinite(y) || y != std::floor(y)) return malformed("'year' is not an integer");
    if (y < kMinYear || y > kMaxYear) {
      r.status = RecordStatus::kYearOutOfRange;
      return r;
    }
    r.stanza.year = static_cast<int>(y);
  } else {
    return malformed("'year' is not an integer");
  }
  return r;
}

template <typename OnRecord>
IngestReport scan_jsonl(std::istream& in, IngestOptions options, std::string_view source,
                        OnRecord&& on_record) {
  IngestReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (text::trim(view).empty()) continue;
    ++report.records;
    ParsedRecord rec = parse_record(view);
    switch (rec.status) {
      case RecordStatus::kMalformed:
        if (options.strict) {
          throw DataError(fmt::format("{}:{}: {}", source, lineno, rec.reason));
        }
        log::warn(fmt::format("{}:{}: skipping malformed record: {}", source, lineno,
                              rec.reason));
        ++report.malformed;
        break;
      case RecordStatus::kMissingYear:
        ++report.missing_year;
        break;
      case RecordStatus::kYearOutOfRange:
        ++report.year_out_of_range;
        break;
      case RecordStatus::kOk:
        on_record(std::move(rec), lineno);
        break;
    }
  }
  if (in.bad()) throw DataError(fmt::format("{}: read error", source));
  return report;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return in;
}

}  // namespace

IngestResult ingest(std::istream& in, IngestOptions options, std::string_view source) {
  IngestResult result;
  result.report = scan_jsonl(in, options, source, [&](ParsedRecord rec, std::size_t) {
    result.stanzas.push_back(std::move(rec.stanza));
  });
  const IngestReport& r = result.report;
  if (r.missing_year > 0 || r.year_out_of_range > 0) {
    log::warn(fmt::format("{}: dropped {} record(s) without year, {} with year outside [{}, {}]",
                          source, r.missing_year, r.year_out_of_range, kMinYear, kMaxYear));
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& path, IngestOptions options) {
  std::ifstream in = open_input(path);
  return ingest(in, options, path.string());
}

DedupResult dedup_first_line(std::vector<Stanza> stanzas) {
  // key -> index of the current keeper
  std::unordered_map<std::string, std::size_t> keeper;
  std::vector<std::string> keys(stanzas.size());
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    if (stanzas[i].lines.empty()) continue;
    keys[i] = text::first_line_key(stanzas[i].lines.front());
    auto [it, inserted] = keeper.try_emplace(keys[i], i);
    if (inserted) continue;
    const Stanza& best = stanzas[it->second];
    const Stanza& cand = stanzas[i];
    if (cand.year < best.year || (cand.year == best.year && cand.id < best.id)) {
      it->second = i;
    }
  }
  DedupResult result;
  result.stanzas.reserve(keeper.size());
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    if (stanzas[i].lines.empty() || keeper.at(keys[i]) == i) {
      result.stanzas.push_back(std::move(stanzas[i]));
    } else {
      ++result.removed;
    }
  }
  return result;
}

LemmaMap parse_lemma_map(std::istream& in) {
  LemmaMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string token = text::to_lower(text::trim(std::string_view(line).substr(0, tab)));
    std::string lemma = text::to_lower(text::trim(std::string_view(line).substr(tab + 1)));
    if (token.empty() || lemma.empty()) continue;
    map[std::move(token)] = std::move(lemma);
  }
  return map;
}

LemmaMap load_lemma_map(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_lemma_map(in);
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view w = text::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(text::to_lower(w));
  }
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_stopwords(in);
}

NormalizeResult normalize(std::vector<Stanza> stanzas, const LemmaMap& lemmas) {
  NormalizeResult result;
  result.stanzas.reserve(stanzas.size());
  for (Stanza& s : stanzas) {
    s.tokens.clear();
    for (const std::string& line : s.lines) {
      for (std::string& tok : text::tokenize(line)) {
        auto it = lemmas.find(tok);
        s.tokens.push_back(it == lemmas.end() ? std::move(tok) : it->second);
      }
    }
    if (s.tokens.empty()) {
      log::warn(fmt::format("stanza '{}' dropped: no tokens after normalization", s.id));
      ++result.dropped_empty;
      continue;
    }
    result.stanzas.push_back(std::move(s));
  }
  return result;
}

CorpusStats corpus_stats(std::span<const Stanza> stanzas) {
  CorpusStats stats;
  std::unordered_set<std::string> poems;
  std::unordered_set<std::string> authors;
  for (const Stanza& s : stanzas) {
    stats.tokens += s.tokens.size();
    stats.lines += s.lines.size();
    ++stats.stanzas;
    // A stanza without poem id stands for its own poem.
    poems.insert(s.poem_id.empty() ? "\x01" + s.id : s.poem_id);
    if (!s.author.empty()) authors.insert(s.author);
  }
  stats.poems = poems.size();
  stats.authors = authors.size();
  return stats;
}

void write_jsonl(std::ostream& out, std::span<const Stanza> stanzas, bool with_tokens) {
  for (const Stanza& s : stanzas) {
    json obj = {{"id", s.id},
                {"poem_id", s.poem_id},
                {"author", s.author},
                {"year", s.year},
                {"lines", s.lines}};
    if (with_tokens) obj["tokens"] = s.tokens;
    out << obj.dump() << '\n';
  }
}

void write_normalized(const std::filesystem::path& path, std::span<const Stanza> stanzas) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  write_jsonl(out, stanzas, /*with_tokens=*/true);
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

std::vector<Stanza> load_normalized(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Stanza> stanzas;
  const std::string source = path.string();
  scan_jsonl(in, IngestOptions{.strict = true}, source,
             [&](ParsedRecord rec, std::size_t lineno) {
               if (!rec.has_tokens) {
                 throw DataError(fmt::format(
                     "{}:{}: record has no 'tokens'; this is not a normalized corpus cache "
                     "(run `dlkv ingest` first)",
                     source, lineno));
               }
               stanzas.push_back(std::move(rec.stanza));
             });
  return stanzas;
}

}  // namespace dlkv
