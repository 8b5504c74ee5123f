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

#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

using namespace dlkv;
using dlkv::testing::make_stanza;
using dlkv::testing::QuietLog;
using dlkv::testing::TempDir;
using Tokens = std::vector<std::string>;

namespace {

IngestResult ingest_text(const std::string& text, IngestOptions options = {}) {
  std::istringstream in(text);
  return ingest(in, options);
}

}  // namespace

TEST_CASE("ingest reads valid records") {
  const IngestResult r = ingest_text(
      R"({"id":"a","poem_id":"p1","author":"Goethe","year":1780,"lines":["Über allen Gipfeln","Ist Ruh"]})"
      "\n"
      R"({"id":"b","author":"Heine","year":1827,"lines":["Ich weiß nicht"],"extra":{"x":1}})"
      "\n\n"
      R"({"id":"c","poem_id":"p2","author":"Rilke","year":1900,"lines":[]})"
      "\n");
  REQUIRE(r.stanzas.size() == 3);
  CHECK(r.report.records == 3);
  CHECK(r.report.dropped() == 0);
  CHECK(r.stanzas[0].id == "a");
  CHECK(r.stanzas[0].poem_id == "p1");
  CHECK(r.stanzas[0].author == "Goethe");
  CHECK(r.stanzas[0].year == 1780);
  CHECK(r.stanzas[0].lines == Tokens{"Über allen Gipfeln", "Ist Ruh"});
  CHECK(r.stanzas[0].tokens.empty());
  CHECK(r.stanzas[1].author == "Heine");
}

TEST_CASE("records without a year are dropped and counted") {
  QuietLog quiet;
  const IngestResult r = ingest_text(R"({"id":"a","author":"x","lines":["eins"]})"
                                     "\n"
                                     R"({"id":"b","author":"x","year":1800,"lines":["zwei"]})"
                                     "\n"
                                     R"({"id":"c","author":"x","year":null,"lines":["drei"]})"
                                     "\n");
  CHECK(r.stanzas.size() == 1);
  CHECK(r.report.missing_year == 2);
}

TEST_CASE("years outside the accepted range are dropped") {
  QuietLog quiet;
  const IngestResult r = ingest_text(R"({"id":"a","author":"x","year":999,"lines":["x"]})"
                                     "\n"
                                     R"({"id":"b","author":"x","year":2101,"lines":["x"]})"
                                     "\n"
                                     R"({"id":"c","author":"x","year":1000,"lines":["x"]})"
                                     "\n"
                                     R"({"id":"d","author":"x","year":2100,"lines":["x"]})"
                                     "\n");
  CHECK(r.stanzas.size() == 2);
  CHECK(r.report.year_out_of_range == 2);
}

TEST_CASE("malformed lines are skipped, or abort in strict mode") {
  QuietLog quiet;
  const std::string text = "{not json}\n"
                           R"({"id":"a","author":"x","year":1800,"lines":"not a list"})"
                           "\n"
                           R"({"id":"b","author":"x","year":1800,"lines":["ok"]})"
                           "\n";
  const IngestResult r = ingest_text(text);
  CHECK(r.stanzas.size() == 1);
  CHECK(r.report.malformed == 2);
  CHECK_THROWS_AS(ingest_text(text, IngestOptions{.strict = true}), DataError);
}

TEST_CASE("unreadable file is fatal") {
  CHECK_THROWS_AS(ingest(std::filesystem::path("/nonexistent/dlkv/corpus.jsonl")), DataError);
}

TEST_CASE("dedup keeps the earliest stanza per first line") {
  std::vector<Stanza> in = {make_stanza("late", 1800, {"Ich liebe dich", "b"}),
                            make_stanza("early", 1700, {"ich liebe dich!", "c"}),
                            make_stanza("other", 1750, {"Du liebst mich"})};
  const DedupResult r = dedup_first_line(in);
  CHECK(r.removed == 1);
  REQUIRE(r.stanzas.size() == 2);
  CHECK(r.stanzas[0].id == "early");
  CHECK(r.stanzas[1].id == "other");
}

TEST_CASE("dedup breaks year ties by smallest id") {
  std::vector<Stanza> in = {make_stanza("b", 1700, {"Nacht"}), make_stanza("a", 1700, {"nacht."}),
                            make_stanza("c", 1700, {"NACHT"})};
  const DedupResult r = dedup_first_line(in);
  REQUIRE(r.stanzas.size() == 1);
  CHECK(r.stanzas[0].id == "a");
}

TEST_CASE("dedup leaves distinct first lines alone and is idempotent") {
  std::vector<Stanza> in = {make_stanza("a", 1700, {"eins"}), make_stanza("b", 1710, {"zwei"}),
                            make_stanza("c", 1720, {"Eins"}), make_stanza("d", 1600, {"drei"})};
  const DedupResult distinct = dedup_first_line({in[0], in[1], in[3]});
  CHECK(distinct.removed == 0);
  CHECK(distinct.stanzas == std::vector<Stanza>{in[0], in[1], in[3]});

  const DedupResult once = dedup_first_line(in);
  const DedupResult twice = dedup_first_line(once.stanzas);
  CHECK(twice.removed == 0);
  CHECK(twice.stanzas == once.stanzas);
}

TEST_CASE("normalize lemmatizes through the map") {
  std::istringstream tsv("blüht\tblühen\nrosen\trose\nrosen\tRose\n");
  const LemmaMap lemmas = parse_lemma_map(tsv);
  CHECK(lemmas.at("rosen") == "rose");  // later line wins, lowercased
  const NormalizeResult r =
      normalize({make_stanza("a", 1800, {"Die Liebe blüht.", "", "Rosen"})}, lemmas);
  REQUIRE(r.stanzas.size() == 1);
  CHECK(r.stanzas[0].tokens == Tokens{"die", "liebe", "blühen", "rose"});
}

TEST_CASE("normalize drops stanzas without tokens") {
  QuietLog quiet;
  const NormalizeResult r =
      normalize({make_stanza("a", 1800, {"", "..."}), make_stanza("b", 1800, {"wort"})}, {});
  CHECK(r.dropped_empty == 1);
  REQUIRE(r.stanzas.size() == 1);
  CHECK(r.stanzas[0].id == "b");
}

TEST_CASE("stopword lists skip comments and blanks") {
  std::istringstream in("# comment\nund\n\n  der \nUnd\n");
  const StopwordSet s = parse_stopwords(in);
  CHECK(s.contains("und"));
  CHECK(s.contains("der"));
  CHECK_FALSE(s.contains("# comment"));
}

TEST_CASE("corpus stats count tokens, lines, poems and authors") {
  std::vector<Stanza> s = {make_stanza("a", 1800, {"x y", "z"}, "A", "p1"),
                           make_stanza("b", 1800, {"w"}, "A", "p1"),
                           make_stanza("c", 1800, {"v"}, "B", "p2")};
  s = normalize(std::move(s), {}).stanzas;
  const CorpusStats st = corpus_stats(s);
  CHECK(st.tokens == 5);
  CHECK(st.lines == 4);
  CHECK(st.stanzas == 3);
  CHECK(st.poems == 2);
  CHECK(st.authors == 2);
}

TEST_CASE("normalized cache round-trips and rejects raw corpora") {
  TempDir dir;
  std::vector<Stanza> s = normalize({make_stanza("a", 1800, {"Herz und Schmerz"}),
                                     make_stanza("b", 1850, {"Nacht"})},
                                    {})
                              .stanzas;
  write_normalized(dir / "cache.jsonl", s);
  CHECK(load_normalized(dir / "cache.jsonl") == s);

  std::ostringstream raw;
  write_jsonl(raw, s, false);
  dlkv::testing::write_text(dir / "raw.jsonl", raw.str());
  CHECK_THROWS_WITH_AS(load_normalized(dir / "raw.jsonl"),
                       doctest::Contains("dlkv ingest"), DataError);
}
