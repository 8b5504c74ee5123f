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

#include "cli.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dlkv/model_io.hpp"
#include "dlkv/synthgen.hpp"
#include "test_util.hpp"

using namespace dlkv;
using namespace dlkv::testing;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dlkv");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

SynthSpec cli_spec() {
  SynthSpec s;
  s.slot_count = 4;
  s.cluster_count = 6;
  s.cluster_size = 10;
  s.tokens_per_slot = 4000;
  s.planted = {{"liebe", PlantKind::kStable, {0}, 0, 0.0, 40},
               {"herz", PlantKind::kAbruptShift, {0, 1}, 2, 0.0, 40},
               {"treue", PlantKind::kLinearDrift, {2, 0}, 0, 0.0, 40}};
  s.seed = 5;
  return s;
}

std::vector<std::string> train_flags(const fs::path& out) {
  return {"--out", out.string(), "--start", "1600", "--end", "1800", "--dim", "8", "--epochs", "2",
          "--min-count", "1", "--subsample", "0", "--seed", "11"};
}

// synth + ingest + train in dir; returns the training log.
std::string prepare(const TempDir& dir) {
  write_text(dir / "spec.json", synth_spec_to_json(cli_spec()));
  REQUIRE(run_cli({"synth", "--spec", (dir / "spec.json").string(), "--out", dir.path().string()}).code == 0);
  const CliResult ing = run_cli({"ingest", "--corpus", (dir / "synth.jsonl").string(), "--out",
                                 dir.path().string(), "--start", "1600", "--end", "1800"});
  REQUIRE(ing.code == 0);
  std::vector<std::string> args = {"train"};
  for (const std::string& a : train_flags(dir.path())) args.push_back(a);
  const CliResult tr = run_cli(args);
  REQUIRE_MESSAGE(tr.code == 0, tr.err);
  return tr.out;
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("synth then ingest keeps every generated stanza") {
  QuietLog quiet;
  TempDir dir;
  write_text(dir / "spec.json", synth_spec_to_json(cli_spec()));
  const CliResult s = run_cli({"synth", "--spec", (dir / "spec.json").string(), "--out", dir.path().string()});
  REQUIRE(s.code == 0);
  const SynthTotals t = synth_totals(cli_spec());
  CHECK(s.out.find("stanzas " + std::to_string(t.stanzas)) != std::string::npos);
  const CliResult ing = run_cli({"ingest", "--corpus", (dir / "synth.jsonl").string(), "--out",
                                 dir.path().string(), "--start", "1600", "--end", "1800"});
  REQUIRE(ing.code == 0);
  CHECK(ing.out.find("dropped: malformed 0, missing year 0, year out of range 0, duplicates 0, empty 0") !=
        std::string::npos);
  const std::vector<Stanza> kept = load_normalized(dir / "normalized.jsonl");
  CHECK(kept.size() == t.stanzas);
  const CorpusStats stats = corpus_stats(kept);
  CHECK(stats.tokens == t.tokens);
  CHECK(stats.lines == t.lines);
}

TEST_CASE("training from the CLI is reproducible") {
  QuietLog quiet;
  TempDir a;
  TempDir b;
  const std::string log_a = prepare(a);
  const std::string log_b = prepare(b);
  auto losses = [](const std::string& log) {
    std::string lines;
    std::istringstream in(log);
    for (std::string l; std::getline(in, l);) {
      if (l.rfind("epoch ", 0) == 0) lines += l + "\n";
    }
    return lines;
  };
  CHECK(line_count(losses(log_a)) == 2);
  CHECK(losses(log_a).rfind("epoch 1 loss", 0) == 0);
  CHECK(losses(log_a) == losses(log_b));
  CHECK(read_text(a / "model.dlkv") == read_text(b / "model.dlkv"));
}

TEST_CASE("analysis subcommands write their outputs") {
  QuietLog quiet;
  TempDir dir;
  prepare(dir);
  const std::string out = dir.path().string();

  const CliResult ss = run_cli({"selfsim", "--out", out, "--top-n", "100000"});
  REQUIRE_MESSAGE(ss.code == 0, ss.err);
  CHECK(line_count(read_text(dir / "pairwise_selfsim.csv")) == 1 + 3);
  CHECK(fs::exists(dir / "pairwise_selfsim.svg"));

  const CliResult cp = run_cli({"changepoints", "--out", out, "--top-n", "3", "--k", "2"});
  REQUIRE_MESSAGE(cp.code == 0, cp.err);
  const std::string cps = read_text(dir / "changepoints.csv");
  CHECK(cps.rfind("rank,year,slot_start,slot_end,depth\n", 0) == 0);
  CHECK(line_count(cps) <= 3);

  const CliResult ts = run_cli({"totalsim", "--out", out, "--min-per-slot", "40"});
  REQUIRE_MESSAGE(ts.code == 0, ts.err);
  const std::string tcsv = read_text(dir / "total_selfsim.csv");
  CHECK(tcsv.find("50,all,") != std::string::npos);
  CHECK(tcsv.find("150,low,") != std::string::npos);
  CHECK(tcsv.find("150,high,") != std::string::npos);
  CHECK(ts.out.find("linear fit: slope") != std::string::npos);

  CHECK(run_cli({"selfsim", "--out", out, "--ranking", "sideways"}).code == 1);
  CHECK(run_cli({"totalsim", "--out", out, "--min-per-slot", "1000000"}).code == 2);
}

TEST_CASE("tropes writes four plots and one report, idempotently") {
  QuietLog quiet;
  TempDir dir;
  prepare(dir);
  const fs::path results = dir / "tropes";
  const std::vector<std::string> args = {"tropes", "--model", (dir / "model.dlkv").string(), "--out",
                                         results.string(), "--target", "liebe", "--top-k", "5"};
  const CliResult r = run_cli(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const std::set<std::string> expected = {"trope_report.csv", "tropes_falling.svg", "tropes_high.svg",
                                          "tropes_low.svg", "tropes_rising.svg"};
  CHECK(listing(results) == expected);
  std::vector<std::string> first;
  for (const std::string& f : expected) first.push_back(read_text(results / f));
  REQUIRE(run_cli(args).code == 0);
  std::size_t i = 0;
  for (const std::string& f : expected) CHECK(read_text(results / f) == first[i++]);

  std::vector<std::string> with_traj = args;
  with_traj.push_back("--write-trajectories");
  REQUIRE(run_cli(with_traj).code == 0);
  CHECK(fs::exists(results / "trajectories.csv"));

  std::vector<std::string> unknown = args;
  unknown[6] = "--target";
  unknown[7] = "sehnsucht";
  CHECK(run_cli(unknown).code == 1);
}

TEST_CASE("command-line flags win over the config file") {
  QuietLog quiet;
  TempDir dir;
  write_text(dir / "spec.json", synth_spec_to_json(cli_spec()));
  write_text(dir / "config.json",
             R"({"spec": ")" + (dir / "spec.json").string() + R"(", "out": ")" + dir.path().string() +
                 R"(", "seed": 3})");
  REQUIRE(run_cli({"synth", "--config", (dir / "config.json").string(), "--seed", "4"}).code == 0);
  SynthSpec expected = cli_spec();
  expected.seed = 4;
  std::ostringstream buf;
  write_jsonl(buf, generate(expected), false);
  CHECK(read_text(dir / "synth.jsonl") == buf.str());

  REQUIRE(run_cli({"synth", "--config", (dir / "config.json").string()}).code == 0);
  expected.seed = 3;
  std::ostringstream buf3;
  write_jsonl(buf3, generate(expected), false);
  CHECK(read_text(dir / "synth.jsonl") == buf3.str());
}

TEST_CASE("usage errors exit with 1") {
  QuietLog quiet;
  TempDir dir;
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"train", "--no-such-flag"}).code == 1);
  CHECK(run_cli({"train", "--dim", "many"}).code == 1);
  CHECK(run_cli({"ingest", "--out", dir.path().string()}).code == 1);
  write_text(dir / "c.json", R"({"no_such_key": 1})");
  CHECK(run_cli({"synth", "--config", (dir / "c.json").string()}).code == 1);
  write_text(dir / "c.json", R"({"dim": "wide"})");
  CHECK(run_cli({"train", "--config", (dir / "c.json").string()}).code == 1);
  write_text(dir / "corpus.jsonl", "");
  const std::string corpus = (dir / "corpus.jsonl").string();
  CHECK(run_cli({"ingest", "--corpus", corpus, "--out", dir.path().string(), "--slots", "weekly"}).code == 1);
  CHECK(run_cli({"ingest", "--corpus", corpus, "--out", dir.path().string(), "--slots", "sliding",
                 "--step", "50"}).code == 1);
  CHECK(run_cli({"ingest", "--corpus", corpus, "--out", dir.path().string(), "--step", "25"}).code == 1);
  CHECK(run_cli({"train", "--help"}).code == 0);
}

TEST_CASE("data errors exit with 2") {
  QuietLog quiet;
  TempDir dir;
  const CliResult r = run_cli({"train", "--out", dir.path().string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("dlkv ingest") != std::string::npos);
  CHECK(run_cli({"ingest", "--corpus", (dir / "absent.jsonl").string(), "--out", dir.path().string()}).code == 2);
  write_text(dir / "model.dlkv", "not a model");
  CHECK(run_cli({"selfsim", "--out", dir.path().string()}).code == 2);
  write_text(dir / "bad.jsonl", "{broken\n");
  CHECK(run_cli({"ingest", "--corpus", (dir / "bad.jsonl").string(), "--out", dir.path().string(),
                 "--strict"}).code == 2);
}

TEST_CASE("ingest accepts an empty corpus and sliding slots") {
  QuietLog quiet;
  TempDir dir;
  write_text(dir / "corpus.jsonl", "");
  const CliResult empty = run_cli({"ingest", "--corpus", (dir / "corpus.jsonl").string(), "--out",
                                   dir.path().string()});
  CHECK(empty.code == 0);
  CHECK(load_normalized(dir / "normalized.jsonl").empty());

  write_text(dir / "corpus.jsonl",
             R"({"id": "a", "year": 1610, "lines": ["Die Liebe brennt"]})" "\n"
             R"({"id": "b", "year": 1890, "lines": ["Das Herz schweigt"]})" "\n");
  const CliResult sliding = run_cli({"ingest", "--corpus", (dir / "corpus.jsonl").string(), "--out",
                                     dir.path().string(), "--slots", "sliding"});
  REQUIRE(sliding.code == 0);
  const std::size_t from = sliding.out.find("stanzas per slot:\n");
  const std::size_t to = sliding.out.find("  outside");
  REQUIRE(from != std::string::npos);
  CHECK(line_count(sliding.out.substr(from, to - from)) == 1 + 13);
}
