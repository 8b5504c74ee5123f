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

// End-to-end acceptance runner. Prints one PASS/FAIL/SKIP line per criterion
// and exits non-zero if any criterion fails.
//
//   dlkv_acceptance            run all criteria
//   dlkv_acceptance 3 5        run a subset
//
// Criterion 8 needs the released DLK corpus: set DLKV_DLK_CORPUS to its JSON
// Lines file (and optionally DLKV_DLK_LEMMAS to a lemma map).

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "dlkv/corpus.hpp"
#include "dlkv/error.hpp"
#include "dlkv/linalg.hpp"
#include "dlkv/model_io.hpp"
#include "dlkv/random.hpp"
#include "dlkv/slots.hpp"
#include "dlkv/synthgen.hpp"
#include "dlkv/trainer.hpp"
#include "dlkv/tropes.hpp"
#include "dlkv/vocab.hpp"
#include "oracles.hpp"
#include "trope_fixture.hpp"

namespace fs = std::filesystem;
using namespace dlkv;

namespace {

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kFail;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) {
  return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class ScratchDir {
 public:
  explicit ScratchDir(std::string_view tag) {
    path_ = fs::temp_directory_path() / fmt::format("dlkv_acceptance_{}_{}", tag, ::getpid());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Runs the CLI in-process; throws with its diagnostics on a non-zero exit.
std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dlkv");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (code != 0) {
    throw std::runtime_error(fmt::format("`dlkv {}` exited {}: {}", args[1], code, err.str()));
  }
  return out.str();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Data rows of a CSV, split on commas, header dropped.
std::vector<std::vector<std::string>> csv_rows(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// Plain least squares, kept separate from the library's fit.
std::pair<double, double> slope_and_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, syy > 0 ? (sxy * sxy) / (sxx * syy) : 0.0};
}

// synth + ingest into dir with fixed 50-year slots from 1600.
void synth_and_ingest(const fs::path& dir, const SynthSpec& spec) {
  write_file(dir / "spec.json", synth_spec_to_json(spec));
  run_cli({"synth", "--spec", (dir / "spec.json").string(), "--out", dir.string()});
  run_cli({"ingest", "--corpus", (dir / "synth.jsonl").string(), "--out", dir.string(), "--start",
           "1600", "--end", std::to_string(1600 + 50 * static_cast<int>(spec.slot_count))});
}

void train_cli(const fs::path& dir, const SynthSpec& spec, const fs::path& model, std::uint64_t seed) {
  run_cli({"train", "--out", dir.string(), "--model", model.string(), "--start", "1600", "--end",
           std::to_string(1600 + 50 * static_cast<int>(spec.slot_count)), "--dim", "32", "--epochs", "5",
           "--subsample", "0", "--min-count", "5", "--seed", std::to_string(seed), "--workers", "1"});
}

// Planted words all start at a shared high frequency so they dominate the
// frequency ranking; word i uses clusters 2i and 2i+1.
SynthSpec two_cluster_spec(PlantKind kind, std::uint64_t seed) {
  SynthSpec s;
  s.slot_count = 6;
  s.cluster_count = 40;
  s.cluster_size = 12;
  s.cluster_skew = 0.0;
  s.tokens_per_slot = 50000;
  s.seed = seed;
  for (std::size_t i = 0; i < 20; ++i) {
    PlantedItem p;
    p.word = fmt::format("planted{:02}", i);
    p.kind = kind;
    p.clusters = {2 * i, 2 * i + 1};
    p.shift_slot = 3;  // fourth slot
    p.count_per_slot = 240;
    s.planted.push_back(p);
  }
  return s;
}

// ---------------------------------------------------------------------------

Outcome gradient_check() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20260101);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t words = 2 + rng.below(19);
    const std::size_t dim = 1 + rng.below(8);
    const std::size_t slots = 2 + rng.below(3);
    JointParams<double> p(words, dim, slots);
    for (double& v : p.main.data()) v = rng.uniform(-0.5, 0.5);
    for (auto& m : p.deltas) {
      for (double& v : m.data()) v = rng.uniform(-0.5, 0.5);
    }
    for (double& v : p.context.data()) v = rng.uniform(-0.5, 0.5);
    std::vector<PairSample> batch(1 + rng.below(6));
    for (PairSample& s : batch) {
      s.target = static_cast<WordId>(rng.below(words));
      s.slot = rng.below(slots);
      s.context = static_cast<WordId>(rng.below(words));
      s.negatives.resize(1 + rng.below(5));
      for (WordId& n : s.negatives) n = static_cast<WordId>(rng.below(words));
    }
    JointParams<double> analytic;
    sgns_gradient(p, std::span<const PairSample>(batch), analytic);
    worst = std::max(worst, oracle::max_relative_error(analytic, oracle::finite_difference_gradient(p, batch, 1e-5)));
  }
  const double secs = seconds_since(t0);
  return pass_if(worst < 1e-4 && secs < 10.0,
                 fmt::format("50 configs, max relative error {:.2e} (< 1e-4), {:.2f} s (< 10 s)", worst, secs));
}

Outcome pca_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(77);
  double eig_err = 0.0, recon_err = 0.0;
  bool ordered = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 1 + rng.below(6);
    const std::size_t n = p + 1 + rng.below(12 - p);
    MatrixD x(n, p);
    for (double& v : x.data()) v = rng.normal();
    const linalg::PcaResult r = linalg::pca(x, p);

    // Covariance computed here, then its spectrum by bisection.
    MatrixD cov(p, p);
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        long double mj = 0, mk = 0, s = 0;
        for (std::size_t i = 0; i < n; ++i) {
          mj += x(i, j);
          mk += x(i, k);
        }
        mj /= n;
        mk /= n;
        for (std::size_t i = 0; i < n; ++i) s += (x(i, j) - mj) * (x(i, k) - mk);
        cov(j, k) = static_cast<double>(s / (n - 1));
      }
    }
    const std::vector<double> want = oracle::eigenvalues_by_bisection(cov);
    for (std::size_t c = 0; c < p; ++c) eig_err = std::max(eig_err, std::abs(r.eigenvalues[c] - want[c]));

    double fro = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        double v = r.mean[j];
        for (std::size_t c = 0; c < p; ++c) v += r.projections(i, c) * r.components(c, j);
        fro += (v - x(i, j)) * (v - x(i, j));
      }
    }
    recon_err = std::max(recon_err, std::sqrt(fro));
    for (std::size_t c = 1; c < p; ++c) {
      ordered = ordered && r.explained_variance_ratio[c] <= r.explained_variance_ratio[c - 1];
    }
  }
  const double secs = seconds_since(t0);
  return pass_if(eig_err < 1e-8 && recon_err < 1e-8 && ordered && secs < 5.0,
                 fmt::format("100 matrices, eigenvalue error {:.1e}, reconstruction {:.1e} (< 1e-8), "
                             "ratios {}, {:.2f} s (< 5 s)",
                             eig_err, recon_err, ordered ? "non-increasing" : "NOT ordered", secs));
}

Outcome planted_shift() {
  const auto t0 = std::chrono::steady_clock::now();
  ScratchDir dir("shift");
  const SynthSpec spec = two_cluster_spec(PlantKind::kAbruptShift, 2026);
  synth_and_ingest(dir.path(), spec);
  // The shift pair is (t_3, t_4): slot starts 1700 and 1750.
  int hits = 0, exact = 0;
  std::string years;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const fs::path model = dir.path() / fmt::format("model_{}.dlkv", seed);
    const fs::path out = dir.path() / fmt::format("cp_{}", seed);
    train_cli(dir.path(), spec, model, seed);
    run_cli({"changepoints", "--model", model.string(), "--out", out.string(), "--top-n", "20", "--k", "3"});
    const auto rows = csv_rows(out / "changepoints.csv");
    const int start = rows.empty() ? 0 : std::stoi(rows[0][2]);
    hits += (start >= 1650 && start <= 1750) ? 1 : 0;
    exact += start == 1700 ? 1 : 0;
    years += (years.empty() ? "" : " ") + (rows.empty() ? std::string("none") : rows[0][1]);
  }
  const double secs = seconds_since(t0);
  return pass_if(hits >= 9 && secs < 300.0,
                 fmt::format("deepest dip at the shift pair (+-1) in {}/10 seeds ({} exact; years {}), "
                             "{:.1f} s (< 300 s)",
                             hits, exact, years, secs));
}

Outcome linearity() {
  const auto t0 = std::chrono::steady_clock::now();
  ScratchDir dir("drift");
  const SynthSpec spec = two_cluster_spec(PlantKind::kLinearDrift, 2027);
  synth_and_ingest(dir.path(), spec);
  const fs::path model = dir.path() / "model.dlkv";
  train_cli(dir.path(), spec, model, 1);
  const std::string log = run_cli({"totalsim", "--model", model.string(), "--out", dir.path().string(),
                                   "--min-per-slot", "240"});
  std::vector<double> x, y;
  for (const auto& row : csv_rows(dir.path() / "total_selfsim.csv")) {
    if (row[1] != "all") continue;
    x.push_back(std::stod(row[0]));
    y.push_back(std::stod(row.back()));
  }
  const auto [slope, r2] = slope_and_r2(x, y);
  const double secs = seconds_since(t0);
  std::string eligible = log.substr(0, log.find('\n'));
  return pass_if(slope < 0.0 && r2 > 0.8 && secs < 180.0,
                 fmt::format("{}, slope {:.3e} per year, r^2 {:.3f} (> 0.8), {:.1f} s (< 180 s)", eligible,
                             slope, r2, secs));
}

Outcome band_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  ScratchDir dir("bands");
  SynthSpec spec;
  spec.slot_count = 6;
  spec.cluster_count = 20;
  spec.cluster_size = 30;
  spec.cluster_skew = 0.0;
  spec.tokens_per_slot = 50000;
  spec.seed = 2028;
  // High-frequency words wander over four context clusters; low-frequency
  // words keep one.
  for (std::size_t i = 0; i < 10; ++i) {
    PlantedItem wide{fmt::format("wide{:02}", i), PlantKind::kWandering, {}, 0, 0.0, 300};
    for (std::size_t k = 0; k < 4; ++k) wide.clusters.push_back(10 + (i + k) % 10);
    spec.planted.push_back(wide);
    spec.planted.push_back({fmt::format("narrow{:02}", i), PlantKind::kStable, {i}, 0, 0.0, 150});
  }
  synth_and_ingest(dir.path(), spec);
  const fs::path model = dir.path() / "model.dlkv";
  train_cli(dir.path(), spec, model, 1);
  const std::string log = run_cli({"totalsim", "--model", model.string(), "--out", dir.path().string(),
                                   "--min-per-slot", "150"});
  std::map<std::string, std::pair<double, double>> by_distance;  // low, high
  for (const auto& row : csv_rows(dir.path() / "total_selfsim.csv")) {
    if (row[1] == "low") by_distance[row[0]].first = std::stod(row.back());
    if (row[1] == "high") by_distance[row[0]].second = std::stod(row.back());
  }
  bool ok = !by_distance.empty();
  double margin = 1.0;
  for (const auto& [d, lh] : by_distance) {
    ok = ok && lh.first >= lh.second;
    margin = std::min(margin, lh.first - lh.second);
  }
  return pass_if(ok, fmt::format("{}, {} distances, smallest low-minus-high gap {:.3f}, {:.1f} s",
                                 log.substr(0, log.find('\n')), by_distance.size(), margin,
                                 seconds_since(t0)));
}

Outcome trope_classification() {
  const std::size_t per = 25;
  double worst_share = 1.0, worst_ratio = 1.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TropeReport r =
        orient_components(trope_pca(testing::shaped_trajectories(per, 6, 0.02, seed), 4, per));
    const std::vector<std::pair<testing::Shape, const std::vector<ExtremeEntry>*>> ends = {
        {testing::kShapeHigh, &r.extremes[0].positive},
        {testing::kShapeLow, &r.extremes[0].negative},
        {testing::kShapeRising, &r.extremes[1].positive},
        {testing::kShapeFalling, &r.extremes[1].negative}};
    for (const auto& [shape, end] : ends) {
      std::size_t right = 0;
      for (const ExtremeEntry& e : *end) right += testing::shape_of(e.row) == shape ? 1 : 0;
      worst_share = std::min(worst_share, static_cast<double>(right) / static_cast<double>(per));
    }
    worst_ratio = std::min(worst_ratio, r.pca.explained_variance_ratio[0] + r.pca.explained_variance_ratio[1]);
  }
  return pass_if(worst_share >= 0.9 && worst_ratio > 0.9,
                 fmt::format("5 fixtures, worst class share {:.0f}% (>= 90%), components 1+2 explain {:.3f} "
                             "(> 0.9)",
                             100.0 * worst_share, worst_ratio));
}

Outcome determinism() {
  SynthSpec spec;
  spec.slot_count = 3;
  spec.cluster_count = 8;
  spec.cluster_size = 10;
  spec.tokens_per_slot = 6000;
  spec.planted = {{"liebe", PlantKind::kAbruptShift, {0, 1}, 1, 0.0, 50}};
  spec.seed = 99;

  std::vector<std::string> failures;
  const std::vector<Stanza> corpus = generate(spec);
  std::ostringstream a_jsonl, b_jsonl;
  write_jsonl(a_jsonl, corpus, false);
  write_jsonl(b_jsonl, generate(spec), false);
  if (a_jsonl.str() != b_jsonl.str()) failures.push_back("synthgen output differs");

  std::vector<Stanza> with_dups = corpus;
  for (std::size_t i = 0; i < 40; ++i) {
    Stanza d = corpus[i * 7];
    d.id += "-copy";
    d.year += 1;
    with_dups.push_back(d);
  }
  const DedupResult once = dedup_first_line(with_dups);
  const DedupResult twice = dedup_first_line(once.stanzas);
  if (once.removed != 40 || twice.removed != 0 || twice.stanzas != once.stanzas) {
    failures.push_back("dedup not idempotent");
  }

  const std::vector<Stanza> norm = normalize(corpus, {}).stanzas;
  const TimeSlotTable slots = build_slots(1600, 1750, 50, 50, false);
  const SlotAssignment assignment = assign(norm, slots);
  const Vocabulary vocab = Vocabulary::build(norm, assignment, 5);
  const SlotCorpus encoded = encode_corpus(norm, assignment, vocab);
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 2;
  cfg.seed = 5;
  cfg.workers = 1;
  const JointEmbeddingModel m1 = train(encoded, vocab, slots, cfg);
  const JointEmbeddingModel m2 = train(encoded, vocab, slots, cfg);
  if (!(m1 == m2)) failures.push_back("training not bit-identical");

  std::ostringstream saved;
  save_model(m1, saved);
  std::istringstream in(saved.str());
  const JointEmbeddingModel loaded = load_model(in);
  std::ostringstream resaved;
  save_model(loaded, resaved);
  if (!(loaded == m1) || resaved.str() != saved.str()) failures.push_back("save/load not byte-identical");

  std::string detail = "training, save/load, dedup and synthgen all reproducible";
  if (!failures.empty()) {
    detail.clear();
    for (const std::string& f : failures) detail += (detail.empty() ? "" : "; ") + f;
  }
  return pass_if(failures.empty(), detail);
}

// Published reference values for the released corpus.
constexpr std::size_t kDlkTokens = 11849112;
constexpr std::size_t kDlkStanzas = 280234;
constexpr std::size_t kDlkPoems = 74155;
constexpr std::size_t kDlkAuthors = 269;
constexpr std::size_t kDlkDuplicates = 9600;
constexpr std::size_t kDlkEligible = 472;

std::size_t table_value(const std::string& log, const std::string& row, int column) {
  std::istringstream in(log);
  for (std::string line; std::getline(in, line);) {
    std::istringstream cells(line);
    std::string name;
    cells >> name;
    if (name != row) continue;
    std::size_t v = 0;
    for (int c = 0; c <= column; ++c) cells >> v;
    return v;
  }
  throw std::runtime_error("ingest output lacks row " + row);
}

Outcome dlk_corpus() {
  const char* corpus = std::getenv("DLKV_DLK_CORPUS");
  if (corpus == nullptr || !fs::is_regular_file(corpus)) {
    return {Outcome::kSkip, "DLK corpus not available; set DLKV_DLK_CORPUS to its JSON Lines file"};
  }
  ScratchDir dir("dlk");
  const std::string out = dir.path().string();
  std::vector<std::string> ingest_args = {"ingest", "--corpus", corpus, "--out", out};
  if (const char* lemmas = std::getenv("DLKV_DLK_LEMMAS")) {
    ingest_args.insert(ingest_args.end(), {"--lemmas", lemmas});
  }
  const std::string log = run_cli(ingest_args);
  std::vector<std::string> failures;
  auto near = [](std::size_t got, std::size_t want, double tol) {
    return std::abs(static_cast<double>(got) - static_cast<double>(want)) <= tol * static_cast<double>(want);
  };
  const std::size_t tokens = table_value(log, "tokens", 0);
  if (!near(tokens, kDlkTokens, 0.05)) failures.push_back(fmt::format("tokens {}", tokens));
  const std::size_t stanzas = table_value(log, "stanzas", 0);
  if (stanzas != kDlkStanzas) failures.push_back(fmt::format("stanzas {}", stanzas));
  const std::size_t poems = table_value(log, "poems", 0);
  if (poems != kDlkPoems) failures.push_back(fmt::format("poems {}", poems));
  const std::size_t authors = table_value(log, "authors", 0);
  if (authors != kDlkAuthors) failures.push_back(fmt::format("authors {}", authors));
  const std::size_t dup_at = log.find("duplicates ");
  const std::size_t dups = dup_at == std::string::npos ? 0 : std::stoul(log.substr(dup_at + 11));
  if (dups != kDlkDuplicates) failures.push_back(fmt::format("duplicates {}", dups));

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  run_cli({"train", "--out", out, "--workers", std::to_string(workers), "--seed", "1"});
  const std::string total = run_cli({"totalsim", "--out", out});
  const std::size_t eligible = std::stoul(total.substr(total.find("eligible words ") + 15));
  if (!near(eligible, kDlkEligible, 0.05)) failures.push_back(fmt::format("eligible {}", eligible));

  run_cli({"tropes", "--out", out, "--target", "liebe"});
  const std::set<std::string> reference = {"frische", "veilchen", "niedersinken", "duftig", "jenseits",
                                           "zauber", "entgleiten", "künden", "hoffend", "efeu",
                                           "enthüllen", "erfüllung", "heimat", "trübe", "gloria"};
  std::size_t shared = 0;
  for (const auto& row : csv_rows(dir.path() / "trope_report.csv")) {
    if (row[0] == "2" && row[1] == "+" && reference.count(row[3])) ++shared;
  }
  if (shared < 5) failures.push_back(fmt::format("rising list shares {} words", shared));

  std::string detail = fmt::format("tokens {}, stanzas {}, poems {}, authors {}, duplicates {}, eligible {}, "
                                   "rising overlap {}",
                                   tokens, stanzas, poems, authors, dups, eligible, shared);
  if (!failures.empty()) detail += "; off: " + fmt::format("{}", fmt::join(failures, ", "));
  return pass_if(failures.empty(), detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient check", gradient_check},
      {"PCA oracle", pca_oracle},
      {"planted abrupt shift", planted_shift},
      {"linearity of total self-similarity", linearity},
      {"frequency-band ordering", band_ordering},
      {"trope classification", trope_classification},
      {"determinism and round trip", determinism},
      {"DLK corpus reference counts", dlk_corpus},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "usage: dlkv_acceptance [criterion 1-" << criteria.size() << "]...\n";
      return 1;
    }
    selected.insert(static_cast<std::size_t>(n));
  }
  log::set_sink([](log::Level, std::string_view) {});

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.count(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Outcome::kFail, fmt::format("error: {}", e.what())};
    }
    const char* tag = o.status == Outcome::kPass ? "PASS" : o.status == Outcome::kSkip ? "SKIP" : "FAIL";
    failed += o.status == Outcome::kFail ? 1 : 0;
    std::cout << fmt::format("[{}] {}. {}: {}", tag, i + 1, criteria[i].first, o.detail) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
