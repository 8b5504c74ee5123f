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

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <type_traits>
#include <vector>

#include "CLI11.hpp"
#include "dlkv/analysis.hpp"
#include "dlkv/corpus.hpp"
#include "dlkv/error.hpp"
#include "dlkv/model_io.hpp"
#include "dlkv/plot.hpp"
#include "dlkv/slots.hpp"
#include "dlkv/synthgen.hpp"
#include "dlkv/text.hpp"
#include "dlkv/trainer.hpp"
#include "dlkv/tropes.hpp"
#include "json.hpp"

namespace dlkv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
struct is_optional : std::false_type {};
template <typename T>
struct is_optional<std::optional<T>> : std::true_type {};

// One flag: how to register it, copy it between configs and read it from JSON.
struct Binding {
  std::string name;  // long flag without dashes
  std::function<CLI::Option*(CLI::App&, RunConfig&)> add;
  std::function<void(RunConfig&, const RunConfig&)> copy;
  std::function<void(RunConfig&, const json&)> from_json;

  std::string json_key() const {
    std::string k = name;
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
  }
};

template <auto Member>
Binding bind(std::string name, std::string desc) {
  Binding b;
  b.name = name;
  b.add = [name, desc](CLI::App& app, RunConfig& c) -> CLI::Option* {
    auto& field = c.*Member;
    using T = std::remove_reference_t<decltype(field)>;
    const std::string flag = "--" + name;
    if constexpr (std::is_same_v<T, bool>) {
      return app.add_flag(flag, field, desc);
    } else if constexpr (std::is_same_v<T, fs::path>) {
      return app.add_option_function<std::string>(
          flag, [&field](const std::string& v) { field = v; }, desc);
    } else if constexpr (is_optional<T>::value) {
      using V = typename T::value_type;
      return app.add_option_function<V>(flag, [&field](const V& v) { field = v; }, desc);
    } else {
      return app.add_option(flag, field, desc);
    }
  };
  b.copy = [](RunConfig& dst, const RunConfig& src) { dst.*Member = src.*Member; };
  b.from_json = [](RunConfig& c, const json& j) {
    auto& field = c.*Member;
    using T = std::remove_reference_t<decltype(field)>;
    if constexpr (std::is_same_v<T, fs::path>) {
      field = j.get<std::string>();
    } else if constexpr (is_optional<T>::value) {
      field = j.get<typename T::value_type>();
    } else {
      field = j.get<T>();
    }
  };
  return b;
}

std::vector<Binding> bindings() {
  return {
      bind<&RunConfig::corpus>("corpus", "Stanza corpus (JSON Lines)"),
      bind<&RunConfig::lemmas>("lemmas", "token<TAB>lemma map"),
      bind<&RunConfig::stopwords>("stopwords", "Stopword list, one per line"),
      bind<&RunConfig::model>("model", "Model file (default <out>/model.dlkv)"),
      bind<&RunConfig::out>("out", "Output directory"),
      bind<&RunConfig::spec>("spec", "Synthetic corpus spec (JSON)"),
      bind<&RunConfig::slots>("slots", "fixed|sliding"),
      bind<&RunConfig::start>("start", "First slot start year"),
      bind<&RunConfig::end>("end", "Slot range end year (exclusive)"),
      bind<&RunConfig::window>("window", "Slot width in years"),
      bind<&RunConfig::step>("step", "Slot step in years"),
      bind<&RunConfig::merge_first>("merge-first", "Merge the first two fixed slots"),
      bind<&RunConfig::dim>("dim", "Embedding dimension"),
      bind<&RunConfig::context_window>("context-window", "Context tokens on each side"),
      bind<&RunConfig::negatives>("negatives", "Negative samples per pair"),
      bind<&RunConfig::epochs>("epochs", "Training epochs"),
      bind<&RunConfig::initial_lr>("initial-lr", "Initial learning rate"),
      bind<&RunConfig::final_lr>("final-lr", "Final learning rate"),
      bind<&RunConfig::subsample>("subsample", "Subsampling threshold (<= 0 disables)"),
      bind<&RunConfig::min_count>("min-count", "Minimum corpus count for the vocabulary"),
      bind<&RunConfig::seed>("seed", "Random seed"),
      bind<&RunConfig::workers>("workers", "Training threads"),
      bind<&RunConfig::strict>("strict", "Abort on the first malformed record"),
      bind<&RunConfig::top_n>("top-n", "Most frequent words for self-similarity"),
      bind<&RunConfig::ranking>("ranking", "global|per-slot frequency ranking"),
      bind<&RunConfig::k>("k", "Number of change points"),
      bind<&RunConfig::min_per_slot>("min-per-slot", "Minimum count in every slot"),
      bind<&RunConfig::target>("target", "Target word for trope trajectories"),
      bind<&RunConfig::min_global>("min-global", "Minimum corpus count for trope candidates"),
      bind<&RunConfig::max_missing>("max-missing", "Slots a trope candidate may miss"),
      bind<&RunConfig::components>("components", "PCA components for tropes"),
      bind<&RunConfig::top_k>("top-k", "Candidates per component extreme"),
      bind<&RunConfig::write_trajectories>("write-trajectories", "Also write trajectories.csv"),
  };
}

std::string num(double v) { return fmt::format("{:.6f}", v); }

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(fmt::format("cannot write {}", path.string()));
  f << content;
  if (!f) throw DataError(fmt::format("write failed: {}", path.string()));
}

void require_file(const fs::path& path, std::string_view what) {
  if (path.empty()) throw UsageError(fmt::format("missing --{}", what));
  if (!fs::is_regular_file(path)) {
    throw DataError(fmt::format("{} file {} does not exist", what, path.string()));
  }
}

TimeSlotTable slot_table(const RunConfig& c) {
  int step = c.window;
  if (c.slots == "sliding") {
    step = c.step.value_or(25);
    if (step >= c.window) throw UsageError("--slots sliding needs --step smaller than --window");
  } else if (c.slots == "fixed") {
    if (c.step && *c.step != c.window) throw UsageError("--slots fixed needs --step equal to --window");
  } else {
    throw UsageError(fmt::format("--slots must be fixed or sliding, got '{}'", c.slots));
  }
  return build_slots(c.start, c.end, c.window, step, c.merge_first);
}

std::string summary_cells(const DistributionSummary& s) {
  return fmt::format("{},{},{},{},{},{},{}", s.n, num(s.median), num(s.q1), num(s.q3),
                     num(s.whisker_lo), num(s.whisker_hi), num(s.mean));
}

JointEmbeddingModel load_checked_model(const RunConfig& c) {
  require_file(c.model_path(), "model");
  return load_model(c.model_path());
}

// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  require_file(c.corpus, "corpus");
  LemmaMap lemmas;
  if (!c.lemmas.empty()) {
    require_file(c.lemmas, "lemmas");
    lemmas = load_lemma_map(c.lemmas);
  }
  IngestResult ingested = ingest(c.corpus, IngestOptions{.strict = c.strict});
  if (ingested.stanzas.empty()) log::warn(fmt::format("{} holds no stanzas", c.corpus.string()));

  CorpusStats raw = corpus_stats(ingested.stanzas);
  for (const Stanza& s : ingested.stanzas) {
    for (const std::string& line : s.lines) raw.tokens += text::tokenize(line).size();
  }
  DedupResult deduped = dedup_first_line(std::move(ingested.stanzas));
  NormalizeResult normalized = normalize(std::move(deduped.stanzas), lemmas);
  write_normalized(c.cache_path(), normalized.stanzas);
  const CorpusStats kept = corpus_stats(normalized.stanzas);

  out << fmt::format("{:<10} {:>12} {:>12}\n", "", "ingested", "kept");
  out << fmt::format("{:<10} {:>12} {:>12}\n", "tokens", raw.tokens, kept.tokens);
  out << fmt::format("{:<10} {:>12} {:>12}\n", "lines", raw.lines, kept.lines);
  out << fmt::format("{:<10} {:>12} {:>12}\n", "stanzas", raw.stanzas, kept.stanzas);
  out << fmt::format("{:<10} {:>12} {:>12}\n", "poems", raw.poems, kept.poems);
  out << fmt::format("{:<10} {:>12} {:>12}\n", "authors", raw.authors, kept.authors);
  const IngestReport& r = ingested.report;
  out << fmt::format("dropped: malformed {}, missing year {}, year out of range {}, "
                     "duplicates {}, empty {}\n",
                     r.malformed, r.missing_year, r.year_out_of_range, deduped.removed,
                     normalized.dropped_empty);

  const TimeSlotTable table = slot_table(c);
  const SlotAssignment assignment = assign(normalized.stanzas, table);
  out << "stanzas per slot:\n";
  for (std::size_t t = 0; t < table.size(); ++t) {
    out << fmt::format("  {:<10} {:>10}\n", table[t].label, assignment.documents[t].size());
  }
  out << fmt::format("  {:<10} {:>10}\n", "outside", assignment.dropped);
  out << fmt::format("cache: {}\n", c.cache_path().string());
  return kOk;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  if (!fs::is_regular_file(c.cache_path())) {
    throw DataError(fmt::format("normalized corpus {} not found; run `dlkv ingest --corpus <file> "
                                "--out {}` first",
                                c.cache_path().string(), c.out.string()));
  }
  const std::vector<Stanza> stanzas = load_normalized(c.cache_path());
  const TimeSlotTable table = slot_table(c);
  const SlotAssignment assignment = assign(stanzas, table);
  Vocabulary vocab = Vocabulary::build(stanzas, assignment, c.min_count);
  const SlotCorpus corpus = encode_corpus(stanzas, assignment, vocab);

  TrainConfig tc;
  tc.dim = c.dim;
  tc.context_window = c.context_window;
  tc.negatives = c.negatives;
  tc.epochs = c.epochs;
  tc.initial_lr = c.initial_lr;
  tc.final_lr = c.final_lr;
  tc.subsample_threshold = c.subsample;
  tc.seed = c.seed.value_or(tc.seed);
  tc.workers = c.workers;

  out << fmt::format("vocabulary {} words, {} slots, dim {}\n", vocab.size(), table.size(), tc.dim);
  TrainStats stats;
  const JointEmbeddingModel model =
      train(corpus, std::move(vocab), table, tc, &stats, [&](std::size_t epoch, double loss) {
        out << fmt::format("epoch {} loss {:.6f}\n", epoch, loss);
      });
  save_model(model, c.model_path());
  out << fmt::format("pairs {}\nmodel: {}\n", stats.pairs, c.model_path().string());
  return kOk;
}

SelfSimSeries selfsim_series(const RunConfig& c, const JointEmbeddingModel& model) {
  FrequencyRanking ranking = FrequencyRanking::kGlobal;
  if (c.ranking == "per-slot") {
    ranking = FrequencyRanking::kPerSlot;
  } else if (c.ranking != "global") {
    throw UsageError(fmt::format("--ranking must be global or per-slot, got '{}'", c.ranking));
  }
  std::size_t top_n = c.top_n;
  if (top_n > model.vocab().size()) {
    log::warn(fmt::format("--top-n {} exceeds the vocabulary; using all {} words", top_n,
                          model.vocab().size()));
    top_n = model.vocab().size();
  }
  return pairwise_selfsim(model, top_n, ranking);
}

int cmd_selfsim(const RunConfig& c, std::ostream& out) {
  const JointEmbeddingModel model = load_checked_model(c);
  const SelfSimSeries series = selfsim_series(c, model);
  const TimeSlotTable& slots = model.slots();

  std::string csv = "slot_start,slot_end,n,median,q1,q3,p5,p95,mean\n";
  std::vector<std::string> labels;
  plot::BoxGroup group;
  for (const SlotPairSelfSim& p : series.pairs) {
    csv += fmt::format("{},{},{}\n", slots[p.first].start, slots[p.second].start,
                       summary_cells(p.summary));
    labels.push_back(fmt::format("{}-{}", slots[p.first].start, slots[p.second].start));
    group.boxes.push_back(p.summary);
    out << fmt::format("{:<12} n={:<6} median={:.4f}\n", labels.back(), p.summary.n, p.summary.median);
  }
  write_file(c.out / "pairwise_selfsim.csv", csv);
  const std::vector<plot::BoxGroup> groups{group};
  write_file(c.out / "pairwise_selfsim.svg",
             plot::box_plot("Pairwise self-similarity", "slot pair (start years)", "cosine",
                            labels, groups));
  return kOk;
}

int cmd_changepoints(const RunConfig& c, std::ostream& out) {
  const JointEmbeddingModel model = load_checked_model(c);
  const SelfSimSeries series = selfsim_series(c, model);
  const std::vector<ChangePoint> points = detect_change_points(series, model.slots(), c.k);
  std::string csv = "rank,year,slot_start,slot_end,depth\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SlotPairSelfSim& p = series.pairs[points[i].pair_index];
    csv += fmt::format("{},{},{},{},{}\n", i + 1, points[i].year, model.slots()[p.first].start,
                       model.slots()[p.second].start, num(points[i].depth));
    out << fmt::format("{}. {} depth {:.4f}\n", i + 1, points[i].year, points[i].depth);
  }
  if (points.empty()) out << "no local minima in the self-similarity medians\n";
  write_file(c.out / "changepoints.csv", csv);
  return kOk;
}

int cmd_totalsim(const RunConfig& c, std::ostream& out) {
  const JointEmbeddingModel model = load_checked_model(c);
  StopwordSet stopwords;
  if (!c.stopwords.empty()) {
    require_file(c.stopwords, "stopwords");
    stopwords = load_stopwords(c.stopwords);
  }
  const TotalSelfSim total = total_selfsim(model, c.min_per_slot.value_or(50), stopwords);
  out << fmt::format("eligible words {}\n", total.words.size());

  std::optional<FrequencyBands> bands;
  if (total.words.size() >= 2) bands = frequency_bands(total);
  std::string csv = "distance_years,band,n,median,q1,q3,p5,p95,mean\n";
  std::vector<std::string> labels;
  for (std::size_t d = 0; d < total.distances.size(); ++d) {
    labels.push_back(std::to_string(total.distances[d]));
    csv += fmt::format("{},all,{}\n", total.distances[d], summary_cells(total.per_distance[d]));
    if (bands) {
      csv += fmt::format("{},low,{}\n", total.distances[d], summary_cells(bands->low[d]));
      csv += fmt::format("{},high,{}\n", total.distances[d], summary_cells(bands->high[d]));
    }
  }
  write_file(c.out / "total_selfsim.csv", csv);

  std::vector<plot::BoxGroup> groups;
  if (bands) {
    groups.push_back({"low frequency", bands->low});
    groups.push_back({"high frequency", bands->high});
  } else {
    groups.push_back({"all words", total.per_distance});
  }
  write_file(c.out / "total_selfsim.svg",
             plot::box_plot("Total self-similarity", "distance (years)", "mean cosine", labels, groups));

  if (total.distances.size() >= 3) {
    const LinearFit fit = linearity_fit(total);
    out << fmt::format("linear fit: slope {:.6g} per year, intercept {:.6f}, r^2 {:.4f}\n",
                       fit.slope, fit.intercept, fit.r_squared);
  } else {
    out << "linear fit skipped: fewer than 3 distances\n";
  }
  return kOk;
}

int cmd_tropes(const RunConfig& c, std::ostream& out) {
  const JointEmbeddingModel model = load_checked_model(c);
  TrajectoryFilter filter;
  filter.min_global = c.min_global;
  filter.min_per_slot = c.min_per_slot.value_or(2);
  filter.max_missing = c.max_missing;
  const TropeReport report =
      orient_components(trope_pca(build_trajectories(model, c.target, filter), c.components, c.top_k));
  const Vocabulary& vocab = model.vocab();
  const TimeSlotTable& slots = model.slots();

  out << fmt::format("target '{}': {} candidate trajectories\n", c.target, report.trajectories.size());
  for (std::size_t i = 0; i < report.pca.explained_variance_ratio.size(); ++i) {
    out << fmt::format("component {} explains {:.4f}\n", i + 1, report.pca.explained_variance_ratio[i]);
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(2, report.extremes.size()); ++i) {
    if (report.extremes[i].orientation_undetermined) {
      log::warn(fmt::format("component {} orientation is undetermined", i + 1));
    }
  }

  std::string csv = "component,end,rank,candidate,projection\n";
  for (std::size_t comp = 0; comp < report.extremes.size(); ++comp) {
    const ComponentExtremes& ex = report.extremes[comp];
    for (const auto& [end, list] : {std::pair{'+', &ex.positive}, std::pair{'-', &ex.negative}}) {
      for (std::size_t r = 0; r < list->size(); ++r) {
        csv += fmt::format("{},{},{},{},{}\n", comp + 1, end, r + 1, vocab.word((*list)[r].candidate),
                           num((*list)[r].projection));
      }
    }
  }
  write_file(c.out / "trope_report.csv", csv);

  if (c.write_trajectories) {
    std::string tcsv = "target,candidate,slot_start,value,imputed\n";
    for (const SimilarityTrajectory& t : report.trajectories) {
      for (std::size_t s = 0; s < t.values.size(); ++s) {
        tcsv += fmt::format("{},{},{},{},{}\n", vocab.word(t.target), vocab.word(t.candidate),
                            slots[s].start, num(t.values[s]), t.imputed[s] ? 1 : 0);
      }
    }
    write_file(c.out / "trajectories.csv", tcsv);
  }

  std::vector<double> years;
  for (const TimeSlot& s : slots.slots) years.push_back(s.start);
  auto emit = [&](std::string_view name, std::size_t comp, bool positive) {
    std::vector<plot::LineSeries> lines;
    if (comp < report.extremes.size()) {
      const auto& list = positive ? report.extremes[comp].positive : report.extremes[comp].negative;
      for (const ExtremeEntry& e : list) {
        lines.push_back({vocab.word(e.candidate), report.trajectories[e.row].values});
      }
    }
    write_file(c.out / fmt::format("tropes_{}.svg", name),
               plot::line_plot(fmt::format("{}: {}", c.target, name), "slot start year",
                               "cosine similarity", years, lines));
  };
  emit("high", 0, true);
  emit("low", 0, false);
  emit("rising", 1, true);
  emit("falling", 1, false);
  return kOk;
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  require_file(c.spec, "spec");
  SynthSpec spec = load_synth_spec(c.spec);
  if (c.seed) spec.seed = *c.seed;
  const std::vector<Stanza> stanzas = generate(spec);
  std::ostringstream buf;
  write_jsonl(buf, stanzas, false);
  const fs::path path = c.out / "synth.jsonl";
  write_file(path, buf.str());
  const SynthTotals totals = synth_totals(spec);
  out << fmt::format("tokens {}\nlines {}\nstanzas {}\npoems {}\nauthors {}\ncorpus: {}\n",
                     totals.tokens, totals.lines, totals.stanzas, totals.poems, totals.authors,
                     path.string());
  return kOk;
}

RunConfig load_config_file(const fs::path& path, const std::vector<Binding>& binds) {
  require_file(path, "config");
  std::ifstream in(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw UsageError(fmt::format("{} is not a JSON object", path.string()));
  }
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(binds.begin(), binds.end(),
                           [&](const Binding& b) { return b.json_key() == key; });
    if (it == binds.end()) throw UsageError(fmt::format("unknown config key '{}'", key));
    try {
      it->from_json(c, value);
    } catch (const json::exception& e) {
      throw UsageError(fmt::format("config key '{}': {}", key, e.what()));
    }
  }
  return c;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  using Handler = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::pair<std::string, std::pair<std::string, Handler>>> commands = {
      {"ingest", {"Read, deduplicate and normalize a stanza corpus", cmd_ingest}},
      {"train", {"Train the joint embedding model", cmd_train}},
      {"selfsim", {"Adjacent-slot self-similarity", cmd_selfsim}},
      {"changepoints", {"Deepest dips in adjacent-slot self-similarity", cmd_changepoints}},
      {"totalsim", {"Self-similarity by slot distance", cmd_totalsim}},
      {"tropes", {"Trajectory PCA for a target word", cmd_tropes}},
      {"synth", {"Generate a synthetic corpus", cmd_synth}},
  };
  const std::vector<Binding> binds = bindings();

  CLI::App app{"Diachronic joint word embeddings for stanza corpora", "dlkv"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;
  std::map<CLI::App*, std::vector<std::pair<const Binding*, CLI::Option*>>> options;
  std::map<CLI::App*, Handler> handlers;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "JSON config; flags override it");
    for (const Binding& b : binds) options[sub].emplace_back(&b, b.add(*sub, flags));
    handlers[sub] = entry.second;
  }

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path, binds);
    for (const auto& [b, opt] : options[sub]) {
      if (opt->count() > 0) b->copy(cfg, flags);
    }
    return handlers[sub](cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::domain_error& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace dlkv::cli
