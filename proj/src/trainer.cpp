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

#include "dlkv/trainer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "dlkv/error.hpp"
#include "dlkv/linalg.hpp"
#include "dlkv/random.hpp"
#include "dlkv/simd/kernels.hpp"

namespace dlkv {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigmoid(x)
double neg_log_sigmoid(double x) {
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

template <typename T>
void check_sample(const JointParams<T>& params, const PairSample& s) {
  const std::size_t words = params.main.rows();
  auto ok = [&](WordId w) { return static_cast<std::size_t>(w) < words; };
  if (!ok(s.target) || !ok(s.context) || s.slot >= params.deltas.size() ||
      !std::all_of(s.negatives.begin(), s.negatives.end(), ok)) {
    throw std::invalid_argument("pair sample indexes outside the model");
  }
}

// Visits (context row, label) for the positive and every negative.
template <typename F>
void for_each_output(const PairSample& s, F&& f) {
  f(s.context, 1.0);
  for (WordId n : s.negatives) f(n, 0.0);
}

template <typename T>
double dot_row(std::span<const double> u, std::span<const T> c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * static_cast<double>(c[i]);
  return acc;
}

template <typename T>
std::vector<double> target_vector(const JointParams<T>& params, const PairSample& s) {
  auto m = params.main.row(s.target);
  auto d = params.deltas[s.slot].row(s.target);
  std::vector<double> u(m.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = static_cast<double>(m[i]) + static_cast<double>(d[i]);
  }
  return u;
}

std::uint64_t pairs_in(std::size_t length, std::size_t window) {
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < length; ++i) {
    pairs += std::min(window, i) + std::min(window, length - 1 - i);
  }
  return pairs;
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("dim must be at least 2");
  if (context_window < 1) throw std::invalid_argument("context window must be at least 1");
  if (negatives < 1) throw std::invalid_argument("negatives must be at least 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(final_lr > 0.0) || !(initial_lr > final_lr)) {
    throw std::invalid_argument("learning rates must satisfy initial_lr > final_lr > 0");
  }
  if (!std::isfinite(subsample_threshold)) {
    throw std::invalid_argument("subsample threshold must be finite");
  }
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

JointEmbeddingModel::JointEmbeddingModel(Vocabulary vocab, TimeSlotTable slots, std::size_t dim)
    : vocab_(std::move(vocab)),
      slots_(std::move(slots)),
      dim_(dim),
      params_(vocab_.size(), dim, slots_.size()) {}

std::vector<float> JointEmbeddingModel::embedding_of(WordId word, std::size_t slot) const {
  if (static_cast<std::size_t>(word) >= vocab_.size()) {
    throw std::invalid_argument(fmt::format("word id {} outside vocabulary", word));
  }
  if (slot >= slots_.size()) {
    throw std::invalid_argument(fmt::format("slot {} outside [0, {})", slot, slots_.size()));
  }
  auto m = params_.main.row(word);
  auto d = params_.deltas[slot].row(word);
  std::vector<float> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = m[i] + d[i];
  return out;
}

std::vector<float> JointEmbeddingModel::embedding_of(std::string_view word,
                                                     std::size_t slot) const {
  return embedding_of(vocab_.at(word), slot);
}

bool JointEmbeddingModel::all_finite() const {
  auto finite = [](const MatrixF& m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](float v) { return std::isfinite(v); });
  };
  return finite(params_.main) && finite(params_.context) &&
         std::all_of(params_.deltas.begin(), params_.deltas.end(), finite);
}

SlotCorpus encode_corpus(std::span<const Stanza> stanzas, const SlotAssignment& assignment,
                         const Vocabulary& vocab) {
  SlotCorpus corpus;
  corpus.documents.resize(assignment.documents.size());
  for (std::size_t t = 0; t < assignment.documents.size(); ++t) {
    for (std::size_t i : assignment.documents[t]) {
      std::vector<WordId> ids;
      ids.reserve(stanzas[i].tokens.size());
      for (const std::string& tok : stanzas[i].tokens) {
        if (auto id = vocab.find(tok)) ids.push_back(*id);
      }
      if (!ids.empty()) corpus.documents[t].push_back(std::move(ids));
    }
  }
  return corpus;
}

template <typename T>
double sgns_loss(const JointParams<T>& params, std::span<const PairSample> batch) {
  double loss = 0.0;
  for (const PairSample& s : batch) {
    check_sample(params, s);
    const std::vector<double> u = target_vector(params, s);
    for_each_output(s, [&](WordId j, double label) {
      const double score = dot_row<T>(u, params.context.row(j));
      loss += neg_log_sigmoid(label > 0.0 ? score : -score);
    });
  }
  return loss;
}

template <typename T>
double sgns_gradient(const JointParams<T>& params, std::span<const PairSample> batch,
                     JointParams<double>& grad) {
  const std::size_t words = params.main.rows();
  const std::size_t dim = params.main.cols();
  grad = JointParams<double>(words, dim, params.deltas.size());
  double loss = 0.0;
  for (const PairSample& s : batch) {
    check_sample(params, s);
    const std::vector<double> u = target_vector(params, s);
    std::vector<double> grad_u(dim, 0.0);
    for_each_output(s, [&](WordId j, double label) {
      auto c = params.context.row(j);
      const double score = dot_row<T>(u, c);
      loss += neg_log_sigmoid(label > 0.0 ? score : -score);
      // d loss / d score
      const double g = sigmoid(score) - label;
      auto gc = grad.context.row(j);
      for (std::size_t i = 0; i < dim; ++i) {
        grad_u[i] += g * static_cast<double>(c[i]);
        gc[i] += g * u[i];
      }
    });
    auto gm = grad.main.row(s.target);
    auto gd = grad.deltas[s.slot].row(s.target);
    for (std::size_t i = 0; i < dim; ++i) {
      gm[i] += grad_u[i];
      gd[i] += grad_u[i];
    }
  }
  return loss;
}

template double sgns_loss<float>(const JointParams<float>&, std::span<const PairSample>);
template double sgns_loss<double>(const JointParams<double>&, std::span<const PairSample>);
template double sgns_gradient<float>(const JointParams<float>&, std::span<const PairSample>,
                                     JointParams<double>&);
template double sgns_gradient<double>(const JointParams<double>&, std::span<const PairSample>,
                                      JointParams<double>&);

double sgns_step(JointParams<float>& params, const PairSample& s, double lr,
                 std::span<double> scratch) {
  const std::size_t dim = params.main.cols();
  if (scratch.size() < 2 * dim) throw std::invalid_argument("sgns_step: scratch too small");
  const simd::KernelTable& k = simd::kernels();
  double* u = scratch.data();
  double* step_u = scratch.data() + dim;

  float* main_row = params.main.row(s.target).data();
  float* delta_row = params.deltas[s.slot].row(s.target).data();
  k.add_widen(main_row, delta_row, u, dim);
  std::fill(step_u, step_u + dim, 0.0);

  // Output-side coefficients first, from untouched context rows.
  const std::size_t outputs = 1 + s.negatives.size();
  double coeff_small[16];
  std::vector<double> coeff_large;
  double* coeff = coeff_small;
  if (outputs > std::size(coeff_small)) {
    coeff_large.resize(outputs);
    coeff = coeff_large.data();
  }
  double loss = 0.0;
  std::size_t slot = 0;
  for_each_output(s, [&](WordId j, double label) {
    const float* c = params.context.row(j).data();
    const double score = k.dot_mixed(u, c, dim);
    loss += neg_log_sigmoid(label > 0.0 ? score : -score);
    const double g = -lr * (sigmoid(score) - label);
    k.axpy_widen(g, c, step_u, dim);
    coeff[slot++] = g;
  });
  slot = 0;
  for_each_output(s, [&](WordId j, double) {
    k.axpy_narrow(coeff[slot++], u, params.context.row(j).data(), dim);
  });
  k.axpy_narrow(1.0, step_u, main_row, dim);
  k.axpy_narrow(1.0, step_u, delta_row, dim);
  return loss;
}

namespace {

struct ScheduledDoc {
  std::uint32_t slot;
  std::uint32_t doc;
};

// Each slot's documents shuffled, then merged so every slot is spread
// evenly over the epoch: document i of slot t sits at (i + 0.5) / n_t.
std::vector<ScheduledDoc> epoch_schedule(const SlotCorpus& corpus, Rng& rng) {
  struct Keyed {
    double key;
    ScheduledDoc doc;
  };
  std::vector<Keyed> keyed;
  for (std::size_t t = 0; t < corpus.slot_count(); ++t) {
    const std::size_t n = corpus.documents[t].size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(std::span(order));
    for (std::size_t i = 0; i < n; ++i) {
      keyed.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(n),
                       {static_cast<std::uint32_t>(t), order[i]}});
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.key < b.key || (a.key == b.key && a.doc.slot < b.doc.slot);
  });
  std::vector<ScheduledDoc> out;
  out.reserve(keyed.size());
  for (const Keyed& k : keyed) out.push_back(k.doc);
  return out;
}

class Trainer {
 public:
  Trainer(const SlotCorpus& corpus, JointEmbeddingModel& model, const TrainConfig& config)
      : corpus_(corpus), model_(model), config_(config) {
    const Vocabulary& vocab = model.vocab();
    std::vector<double> weights(vocab.size());
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      const double c = static_cast<double>(vocab.global_count(static_cast<WordId>(i)));
      weights[i] = std::pow(c, 0.75);
      total += c;
    }
    negatives_ = AliasTable(weights);

    keep_prob_.assign(vocab.size(), 1.0);
    if (config.subsample_threshold > 0.0 && total > 0.0) {
      const double t = config.subsample_threshold;
      for (std::size_t i = 0; i < vocab.size(); ++i) {
        const double f = static_cast<double>(vocab.global_count(static_cast<WordId>(i))) / total;
        if (f > 0.0) keep_prob_[i] = std::min(1.0, (std::sqrt(f / t) + 1.0) * t / f);
      }
    }

    doc_pairs_.resize(corpus.slot_count());
    for (std::size_t t = 0; t < corpus.slot_count(); ++t) {
      for (const auto& doc : corpus.documents[t]) {
        const std::uint64_t p = pairs_in(doc.size(), config.context_window);
        doc_pairs_[t].push_back(p);
        pairs_per_epoch_ += p;
      }
    }
    total_pairs_ = pairs_per_epoch_ * config.epochs;
  }

  void run(TrainStats* stats, const EpochCallback& on_epoch) {
    Rng schedule_rng(derive_seed(config_.seed, 1));
    std::atomic<std::uint64_t> progress{0};
    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
      const std::vector<ScheduledDoc> schedule = epoch_schedule(corpus_, schedule_rng);
      const std::size_t workers = std::max<std::size_t>(1, config_.workers);
      std::vector<double> loss(workers, 0.0);
      std::vector<std::uint64_t> pairs(workers, 0);
      auto work = [&](std::size_t w) {
        Rng rng(derive_seed(config_.seed, 1000 + epoch * workers + w));
        std::vector<double> scratch(2 * model_.dim());
        std::vector<WordId> kept;
        PairSample sample;
        sample.negatives.resize(config_.negatives);
        for (std::size_t i = w; i < schedule.size(); i += workers) {
          const ScheduledDoc& sd = schedule[i];
          const auto& doc = corpus_.documents[sd.slot][sd.doc];
          const std::uint64_t done = progress.load(std::memory_order_relaxed);
          const double frac =
              total_pairs_ == 0 ? 0.0 : static_cast<double>(done) / static_cast<double>(total_pairs_);
          const double lr = std::max(config_.final_lr,
                                     config_.initial_lr - (config_.initial_lr - config_.final_lr) *
                                                              std::min(1.0, frac));
          kept.clear();
          for (WordId id : doc) {
            if (keep_prob_[id] >= 1.0 || rng.uniform() < keep_prob_[id]) kept.push_back(id);
          }
          sample.slot = sd.slot;
          for (std::size_t pos = 0; pos < kept.size(); ++pos) {
            sample.target = kept[pos];
            const std::size_t lo = pos >= config_.context_window ? pos - config_.context_window : 0;
            const std::size_t hi = std::min(kept.size() - 1, pos + config_.context_window);
            for (std::size_t c = lo; c <= hi; ++c) {
              if (c == pos) continue;
              sample.context = kept[c];
              for (WordId& n : sample.negatives) n = draw_negative(rng, sample.context);
              loss[w] += sgns_step(model_.params(), sample, lr, scratch);
              ++pairs[w];
            }
          }
          progress.fetch_add(doc_pairs_[sd.slot][sd.doc], std::memory_order_relaxed);
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& th : threads) th.join();
      }

      if (!model_.all_finite()) {
        throw NumericError(fmt::format("non-finite parameters after epoch {}", epoch + 1));
      }
      const double epoch_loss = std::accumulate(loss.begin(), loss.end(), 0.0);
      const std::uint64_t epoch_pairs = std::accumulate(pairs.begin(), pairs.end(), std::uint64_t{0});
      const double mean = epoch_pairs == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_pairs);
      if (stats != nullptr) {
        stats->epoch_loss.push_back(mean);
        stats->pairs += epoch_pairs;
      }
      if (on_epoch) on_epoch(epoch + 1, mean);
    }
  }

 private:
  WordId draw_negative(Rng& rng, WordId positive) const {
    // Redraw collisions with the positive context; give up after a few tries
    // so a degenerate one-word distribution cannot spin.
    WordId n = static_cast<WordId>(negatives_.sample(rng));
    for (int tries = 0; n == positive && tries < 8; ++tries) {
      n = static_cast<WordId>(negatives_.sample(rng));
    }
    return n;
  }

  const SlotCorpus& corpus_;
  JointEmbeddingModel& model_;
  const TrainConfig& config_;
  AliasTable negatives_;
  std::vector<double> keep_prob_;
  std::vector<std::vector<std::uint64_t>> doc_pairs_;
  std::uint64_t pairs_per_epoch_ = 0;
  std::uint64_t total_pairs_ = 0;
};

}  // namespace

JointEmbeddingModel train(const SlotCorpus& corpus, Vocabulary vocab, TimeSlotTable slots,
                          const TrainConfig& config, TrainStats* stats,
                          const EpochCallback& on_epoch) {
  config.validate();
  if (slots.size() < 2) throw std::invalid_argument("training needs at least 2 slots");
  if (corpus.slot_count() != slots.size()) {
    throw std::invalid_argument("corpus and slot table disagree on slot count");
  }
  for (std::size_t t = 0; t < corpus.slot_count(); ++t) {
    for (const auto& doc : corpus.documents[t]) {
      for (WordId id : doc) {
        if (static_cast<std::size_t>(id) >= vocab.size()) {
          throw std::invalid_argument("corpus token id outside vocabulary");
        }
      }
    }
    if (corpus.documents[t].empty()) {
      log::warn(fmt::format("slot {} ({}) has no documents; its delta matrix stays zero", t,
                            slots[t].label));
    }
  }

  JointEmbeddingModel model(std::move(vocab), std::move(slots), config.dim);
  Rng init_rng(derive_seed(config.seed, 0));
  const double half = 0.5 / static_cast<double>(config.dim);
  for (float& v : model.params().main.data()) v = static_cast<float>(init_rng.uniform(-half, half));

  Trainer trainer(corpus, model, config);
  trainer.run(stats, on_epoch);
  return model;
}

std::vector<Neighbor> nearest_neighbors(const JointEmbeddingModel& model, std::string_view word,
                                        std::size_t slot, std::size_t k) {
  const WordId query = model.vocab().at(word);
  const std::vector<float> q = model.embedding_of(query, slot);
  if (k == 0) return {};
  const simd::KernelTable& kern = simd::kernels();
  const double qq = kern.dot(q.data(), q.data(), q.size());
  if (!(qq > 0.0)) throw std::domain_error("nearest_neighbors: query vector has zero norm");

  std::vector<Neighbor> all;
  all.reserve(model.vocab().size());
  for (std::size_t i = 0; i < model.vocab().size(); ++i) {
    const auto id = static_cast<WordId>(i);
    if (id == query) continue;
    const std::vector<float> v = model.embedding_of(id, slot);
    const double vv = kern.dot(v.data(), v.data(), v.size());
    if (!(vv > 0.0)) continue;
    all.push_back({id, {}, linalg::cossim(q, v)});
  }
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(),
                    [](const Neighbor& a, const Neighbor& b) {
                      return a.cosine > b.cosine || (a.cosine == b.cosine && a.id < b.id);
                    });
  all.resize(take);
  for (Neighbor& n : all) n.word = model.vocab().word(n.id);
  return all;
}

}  // namespace dlkv
