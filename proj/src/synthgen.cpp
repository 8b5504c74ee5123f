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

#include "dlkv/synthgen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "dlkv/error.hpp"
#include "dlkv/random.hpp"
#include "dlkv/text.hpp"
#include "json.hpp"

namespace dlkv {
namespace {

using nlohmann::json;

constexpr std::size_t kAuthors = 12;
constexpr std::size_t kStanzasPerPoem = 4;
constexpr int kMaxLineRetries = 200;

std::size_t stanzas_per_slot(const SynthSpec& spec) {
  return spec.tokens_per_slot / spec.stanza_tokens;
}

class Generator {
 public:
  explicit Generator(const SynthSpec& spec) : spec_(spec), rng_(spec.seed) {
    std::vector<double> weights(spec.cluster_size);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      weights[j] = std::pow(static_cast<double>(j + 1), -spec.cluster_skew);
    }
    within_cluster_ = AliasTable(weights);
    for (std::size_t c = 0; c < spec.cluster_count; ++c) {
      std::vector<std::string> words;
      for (std::size_t j = 0; j < spec.cluster_size; ++j) words.push_back(filler_word(c, j));
      cluster_words_.push_back(std::move(words));
    }
  }

  std::vector<Stanza> run() {
    std::vector<Stanza> out;
    const std::size_t per_slot = stanzas_per_slot(spec_);
    for (std::size_t t = 0; t < spec_.slot_count; ++t) {
      // Per-slot cluster choice for wandering items.
      std::vector<std::size_t> wander(spec_.planted.size(), 0);
      for (std::size_t p = 0; p < spec_.planted.size(); ++p) {
        const PlantedItem& item = spec_.planted[p];
        if (item.kind == PlantKind::kWandering) wander[p] = item.clusters[rng_.below(item.clusters.size())];
      }
      // Stanza plan: planted item index or npos for background.
      std::vector<std::size_t> plan;
      for (std::size_t p = 0; p < spec_.planted.size(); ++p) {
        plan.insert(plan.end(), spec_.planted[p].count_per_slot, p);
      }
      plan.resize(per_slot, kBackground);
      rng_.shuffle(std::span(plan));

      const int slot_start = spec_.start_year + static_cast<int>(t) * spec_.slot_years;
      for (std::size_t n = 0; n < plan.size(); ++n) {
        Stanza s;
        s.id = fmt::format("syn-{}-{:06}", t, n);
        s.poem_id = fmt::format("synp-{}-{:05}", t, n / kStanzasPerPoem);
        s.author = fmt::format("synth-author-{:02}", n % kAuthors);
        s.year = slot_start + static_cast<int>(rng_.below(static_cast<std::size_t>(spec_.slot_years)));
        s.lines = plan[n] == kBackground ? background_lines() : planted_lines(plan[n], t, wander[plan[n]]);
        out.push_back(std::move(s));
      }
    }
    return out;
  }

 private:
  static constexpr std::size_t kBackground = static_cast<std::size_t>(-1);

  const std::string& draw_from(std::size_t cluster) {
    return cluster_words_[cluster][within_cluster_.sample(rng_)];
  }

  std::size_t context_cluster(const PlantedItem& item, std::size_t slot, std::size_t wander) {
    switch (item.kind) {
      case PlantKind::kStable:
        return item.clusters[0];
      case PlantKind::kAbruptShift:
        return slot < item.shift_slot ? item.clusters[0] : item.clusters[1];
      case PlantKind::kLinearDrift: {
        const double rate = item.drift_rate > 0.0
                                ? item.drift_rate
                                : 1.0 / static_cast<double>(spec_.slot_count - 1);
        const double p = std::min(1.0, rate * static_cast<double>(slot));
        return rng_.uniform() < p ? item.clusters[1] : item.clusters[0];
      }
      case PlantKind::kWandering:
        return wander;
    }
    return item.clusters[0];
  }

  std::vector<std::string> split_lines(const std::vector<std::string>& tokens) const {
    std::vector<std::string> lines(spec_.lines_per_stanza);
    // Even split; every line gets at least one token since lines <= tokens.
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::string& line = lines[i * lines.size() / tokens.size()];
      if (!line.empty()) line.push_back(' ');
      line += tokens[i];
    }
    return lines;
  }

  // Draws until the first line has not been used before.
  template <typename Fill>
  std::vector<std::string> unique_lines(Fill&& fill) {
    std::vector<std::string> tokens(spec_.stanza_tokens);
    for (int attempt = 0; attempt < kMaxLineRetries; ++attempt) {
      fill(tokens);
      std::vector<std::string> lines = split_lines(tokens);
      if (first_lines_.insert(text::first_line_key(lines.front())).second) return lines;
    }
    throw DataError("synthgen: could not draw a unique first line; enlarge clusters or stanzas");
  }

  std::vector<std::string> background_lines() {
    const std::size_t cluster = rng_.below(spec_.cluster_count);
    return unique_lines([&](std::vector<std::string>& tokens) {
      for (std::string& tok : tokens) tok = draw_from(cluster);
    });
  }

  std::vector<std::string> planted_lines(std::size_t p, std::size_t slot, std::size_t wander) {
    const PlantedItem& item = spec_.planted[p];
    return unique_lines([&](std::vector<std::string>& tokens) {
      const std::size_t at = rng_.below(tokens.size());
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        tokens[i] = i == at ? item.word : draw_from(context_cluster(item, slot, wander));
      }
    });
  }

  const SynthSpec& spec_;
  Rng rng_;
  AliasTable within_cluster_;
  std::vector<std::vector<std::string>> cluster_words_;
  std::unordered_set<std::string> first_lines_;
};

PlantKind parse_kind(const std::string& name) {
  if (name == "stable") return PlantKind::kStable;
  if (name == "abrupt_shift") return PlantKind::kAbruptShift;
  if (name == "linear_drift") return PlantKind::kLinearDrift;
  if (name == "wandering") return PlantKind::kWandering;
  throw DataError(fmt::format("unknown planted kind '{}'", name));
}

}  // namespace

std::string filler_word(std::size_t cluster, std::size_t index) {
  return fmt::format("c{}w{}", cluster, index);
}

std::string_view plant_kind_name(PlantKind kind) {
  switch (kind) {
    case PlantKind::kStable:
      return "stable";
    case PlantKind::kAbruptShift:
      return "abrupt_shift";
    case PlantKind::kLinearDrift:
      return "linear_drift";
    case PlantKind::kWandering:
      return "wandering";
  }
  return "unknown";
}

void SynthSpec::validate() const {
  if (slot_count < 2) throw std::invalid_argument("synth: need at least 2 slots");
  if (slot_years <= 0) throw std::invalid_argument("synth: slot_years must be positive");
  if (start_year < kMinYear ||
      start_year + static_cast<long long>(slot_count) * slot_years > kMaxYear + 1) {
    throw std::invalid_argument("synth: years fall outside the accepted range");
  }
  if (cluster_count < 1 || cluster_size < 1) throw std::invalid_argument("synth: empty clusters");
  if (!std::isfinite(cluster_skew) || cluster_skew < 0.0) {
    throw std::invalid_argument("synth: cluster_skew must be finite and >= 0");
  }
  if (stanza_tokens < 2) throw std::invalid_argument("synth: stanzas need at least 2 tokens");
  if (lines_per_stanza < 1 || lines_per_stanza > stanza_tokens) {
    throw std::invalid_argument("synth: lines_per_stanza must be in [1, stanza_tokens]");
  }
  std::unordered_set<std::string> seen;
  std::size_t planted_stanzas = 0;
  for (const PlantedItem& item : planted) {
    if (item.word.empty() || text::tokenize(item.word) != std::vector<std::string>{item.word}) {
      throw std::invalid_argument(
          fmt::format("synth: planted word '{}' must be a single lowercase token", item.word));
    }
    if (!seen.insert(item.word).second) {
      throw std::invalid_argument(fmt::format("synth: planted word '{}' repeated", item.word));
    }
    for (std::size_t c = 0; c < cluster_count; ++c) {
      for (std::size_t j = 0; j < cluster_size; ++j) {
        if (item.word == filler_word(c, j)) {
          throw std::invalid_argument(fmt::format("synth: '{}' collides with a filler word", item.word));
        }
      }
    }
    const std::size_t need = item.kind == PlantKind::kAbruptShift || item.kind == PlantKind::kLinearDrift ? 2 : 1;
    if (item.clusters.size() < need) {
      throw std::invalid_argument(fmt::format("synth: '{}' needs {} cluster(s)", item.word, need));
    }
    for (std::size_t c : item.clusters) {
      if (c >= cluster_count) throw std::invalid_argument("synth: cluster index out of range");
    }
    if (item.kind == PlantKind::kAbruptShift && (item.shift_slot == 0 || item.shift_slot >= slot_count)) {
      throw std::invalid_argument(
          fmt::format("synth: shift slot for '{}' must be in [1, {})", item.word, slot_count));
    }
    planted_stanzas += item.count_per_slot;
  }
  if (planted_stanzas * stanza_tokens > tokens_per_slot) {
    throw std::invalid_argument(fmt::format(
        "synth: tokens_per_slot {} cannot hold {} planted stanzas of {} tokens", tokens_per_slot,
        planted_stanzas, stanza_tokens));
  }
}

std::vector<Stanza> generate(const SynthSpec& spec) {
  spec.validate();
  return Generator(spec).run();
}

SynthTotals synth_totals(const SynthSpec& spec) {
  spec.validate();
  const std::size_t per_slot = stanzas_per_slot(spec);
  SynthTotals t;
  t.stanzas = per_slot * spec.slot_count;
  t.tokens = t.stanzas * spec.stanza_tokens;
  t.lines = t.stanzas * spec.lines_per_stanza;
  t.poems = spec.slot_count * ((per_slot + kStanzasPerPoem - 1) / kStanzasPerPoem);
  t.authors = std::min(kAuthors, per_slot);
  return t;
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("synth spec is not a JSON object");
  SynthSpec spec;
  try {
    spec.slot_count = j.value("slot_count", spec.slot_count);
    spec.start_year = j.value("start_year", spec.start_year);
    spec.slot_years = j.value("slot_years", spec.slot_years);
    spec.cluster_count = j.value("cluster_count", spec.cluster_count);
    spec.cluster_size = j.value("cluster_size", spec.cluster_size);
    spec.cluster_skew = j.value("cluster_skew", spec.cluster_skew);
    spec.tokens_per_slot = j.value("tokens_per_slot", spec.tokens_per_slot);
    spec.stanza_tokens = j.value("stanza_tokens", spec.stanza_tokens);
    spec.lines_per_stanza = j.value("lines_per_stanza", spec.lines_per_stanza);
    spec.seed = j.value("seed", spec.seed);
    for (const json& p : j.value("planted", json::array())) {
      PlantedItem item;
      item.word = p.at("word").get<std::string>();
      item.kind = parse_kind(p.value("kind", std::string("stable")));
      item.clusters = p.value("clusters", std::vector<std::size_t>{});
      item.shift_slot = p.value("shift_slot", item.shift_slot);
      item.drift_rate = p.value("drift_rate", item.drift_rate);
      item.count_per_slot = p.value("count_per_slot", item.count_per_slot);
      spec.planted.push_back(std::move(item));
    }
  } catch (const json::exception& e) {
    throw DataError(fmt::format("bad synth spec: {}", e.what()));
  }
  return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_synth_spec(buf.str());
}

std::string synth_spec_to_json(const SynthSpec& spec) {
  json planted = json::array();
  for (const PlantedItem& item : spec.planted) {
    planted.push_back({{"word", item.word},
                       {"kind", plant_kind_name(item.kind)},
                       {"clusters", item.clusters},
                       {"shift_slot", item.shift_slot},
                       {"drift_rate", item.drift_rate},
                       {"count_per_slot", item.count_per_slot}});
  }
  json j = {{"slot_count", spec.slot_count},       {"start_year", spec.start_year},
            {"slot_years", spec.slot_years},       {"cluster_count", spec.cluster_count},
            {"cluster_size", spec.cluster_size},   {"cluster_skew", spec.cluster_skew},
            {"tokens_per_slot", spec.tokens_per_slot},
            {"stanza_tokens", spec.stanza_tokens}, {"lines_per_stanza", spec.lines_per_stanza},
            {"seed", spec.seed},                   {"planted", planted}};
  return j.dump(2);
}

}  // namespace dlkv
