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

// `dlkv` command-line front end.
//
//   dlkv ingest       --corpus stanzas.jsonl [--lemmas map.tsv] --out DIR
//   dlkv train        --out DIR [--model FILE] [slotting] [training flags]
//   dlkv selfsim      --model FILE --out DIR [--top-n 3000]
//   dlkv changepoints --model FILE --out DIR [--top-n 3000] [--k 3]
//   dlkv totalsim     --model FILE --out DIR [--min-per-slot 50] [--stopwords F]
//   dlkv tropes       --model FILE --out DIR --target liebe [--min-global 30]
//   dlkv synth        --spec spec.json --out DIR
//
// Every subcommand also takes --config FILE, a JSON object whose keys are the
// long flag names with '-' replaced by '_'. Flags given on the command line
// win over the config file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

namespace dlkv::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path lemmas;
  std::filesystem::path stopwords;
  std::filesystem::path model;  // default <out>/model.dlkv
  std::filesystem::path out = "out";
  std::filesystem::path spec;

  std::string slots = "fixed";
  int start = 1575;
  int end = 1925;
  int window = 50;
  std::optional<int> step;  // fixed: window, sliding: 25
  bool merge_first = false;

  std::size_t dim = 100;
  std::size_t context_window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  double final_lr = 1e-4;
  double subsample = 1e-4;
  std::uint64_t min_count = 5;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  bool strict = false;

  std::size_t top_n = 3000;
  std::string ranking = "global";
  std::size_t k = 3;
  std::optional<std::uint64_t> min_per_slot;  // totalsim: 50, tropes: 2
  std::string target = "liebe";
  std::uint64_t min_global = 30;
  std::size_t max_missing = 1;
  std::size_t components = 4;
  std::size_t top_k = 25;
  bool write_trajectories = false;

  std::filesystem::path model_path() const { return model.empty() ? out / "model.dlkv" : model; }
  std::filesystem::path cache_path() const { return out / "normalized.jsonl"; }
};

// Parses `args` (args[0] is the program name), runs the subcommand and
// returns an ExitCode. Reports go to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dlkv::cli
