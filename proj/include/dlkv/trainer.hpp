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

// Joint time-conditioned skip-gram with negative sampling.
//
// A word's vector in slot t is main[w] + delta_t[w]. All slots share one
// context matrix. For a positive pair (w in slot t, context c) and sampled
// negatives n_1..n_k the loss is
//
//   -log sigmoid(u . C[c]) - sum_k log sigmoid(-u . C[n_k]),  u = main[w] + delta_t[w]
//
// and d/du is applied to main[w] and delta_t[w] alike. Deltas start at zero,
// so a word never seen in slot t keeps delta_t[w] == 0 and its slot-t vector
// is exactly the main vector.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlkv/matrix.hpp"
#include "dlkv/slots.hpp"
#include "dlkv/vocab.hpp"

namespace dlkv {

struct TrainConfig {
  std::size_t dim = 100;
  std::size_t context_window = 5;  // tokens on each side
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  double final_lr = 1e-4;
  double subsample_threshold = 1e-4;  // <= 0 disables subsampling
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  // Throws std::invalid_argument.
  void validate() const;
};

template <typename T>
struct JointParams {
  Matrix<T> main;
  std::vector<Matrix<T>> deltas;  // one per slot
  Matrix<T> context;

  JointParams() = default;
  JointParams(std::size_t words, std::size_t dim, std::size_t slots)
      : main(words, dim), deltas(slots, Matrix<T>(words, dim)), context(words, dim) {}

  bool operator==(const JointParams&) const = default;
};

class JointEmbeddingModel {
 public:
  JointEmbeddingModel() = default;
  // All matrices zero.
  JointEmbeddingModel(Vocabulary vocab, TimeSlotTable slots, std::size_t dim);

  const Vocabulary& vocab() const { return vocab_; }
  const TimeSlotTable& slots() const { return slots_; }
  std::size_t dim() const { return dim_; }
  std::size_t slot_count() const { return slots_.size(); }

  JointParams<float>& params() { return params_; }
  const JointParams<float>& params() const { return params_; }

  // main[w] + delta_t[w]. Throws std::invalid_argument for an unknown word or
  // an out-of-range slot.
  std::vector<float> embedding_of(WordId word, std::size_t slot) const;
  std::vector<float> embedding_of(std::string_view word, std::size_t slot) const;

  bool all_finite() const;

  bool operator==(const JointEmbeddingModel&) const = default;

 private:
  Vocabulary vocab_;
  TimeSlotTable slots_;
  std::size_t dim_ = 0;
  JointParams<float> params_;
};

// Token ids per document per slot; out-of-vocabulary tokens removed. Context
// windows never reach across documents.
struct SlotCorpus {
  std::vector<std::vector<std::vector<WordId>>> documents;

  std::size_t slot_count() const { return documents.size(); }
};

SlotCorpus encode_corpus(std::span<const Stanza> stanzas, const SlotAssignment& assignment,
                         const Vocabulary& vocab);

// One positive pair with its negatives.
struct PairSample {
  WordId target = 0;
  std::size_t slot = 0;
  WordId context = 0;
  std::vector<WordId> negatives;
};

// Summed loss over `batch`.
template <typename T>
double sgns_loss(const JointParams<T>& params, std::span<const PairSample> batch);

// Summed loss; writes the full dense gradient into `grad` (resized to match).
template <typename T>
double sgns_gradient(const JointParams<T>& params, std::span<const PairSample> batch,
                     JointParams<double>& grad);

// Applies one SGD step for `sample` in place (f32 storage, f64 accumulation,
// dispatched SIMD kernels). Every term is evaluated at the pre-step
// parameters, so the update equals -lr times sgns_gradient. `scratch` must
// hold at least 2 * dim doubles. Returns the pair loss before the step.
double sgns_step(JointParams<float>& params, const PairSample& sample, double lr,
                 std::span<double> scratch);

struct TrainStats {
  std::vector<double> epoch_loss;  // mean loss per positive pair
  std::uint64_t pairs = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

// Trains from scratch. Requires at least 2 slots and corpus.slot_count() ==
// slots.size(). With workers == 1 the result is a pure function of the
// inputs and config.seed. Throws NumericError if parameters stop being finite.
JointEmbeddingModel train(const SlotCorpus& corpus, Vocabulary vocab, TimeSlotTable slots,
                          const TrainConfig& config, TrainStats* stats = nullptr,
                          const EpochCallback& on_epoch = {});

struct Neighbor {
  WordId id;
  std::string word;
  double cosine;
};

// Top-k words by cosine to `word` in `slot`, excluding the word itself.
// Ties go to the lower vocabulary index; zero vectors are skipped.
std::vector<Neighbor> nearest_neighbors(const JointEmbeddingModel& model, std::string_view word,
                                        std::size_t slot, std::size_t k);

}  // namespace dlkv
