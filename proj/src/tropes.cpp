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

#include "dlkv/tropes.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "dlkv/error.hpp"
#include "dlkv/stats.hpp"

namespace dlkv {
namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Least-squares slope against slot index.
double slope_of(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mx = (n - 1.0) / 2.0;
  const double my = mean_of(v);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double dx = static_cast<double>(i) - mx;
    sxx += dx * dx;
    sxy += dx * (v[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

ComponentExtremes extremes_for(const TropeReport& report, std::size_t component) {
  const std::size_t n = report.trajectories.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto proj = [&](std::size_t row) { return report.pca.projections(row, component); };
  auto cand = [&](std::size_t row) { return report.trajectories[row].candidate; };
  const std::size_t take = std::min(report.top_k, n / 2);

  ComponentExtremes out;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proj(a) > proj(b) || (proj(a) == proj(b) && cand(a) < cand(b));
  });
  for (std::size_t i = 0; i < take; ++i) out.positive.push_back({order[i], cand(order[i]), proj(order[i])});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proj(a) < proj(b) || (proj(a) == proj(b) && cand(a) < cand(b));
  });
  for (std::size_t i = 0; i < take; ++i) out.negative.push_back({order[i], cand(order[i]), proj(order[i])});
  return out;
}

// Mean of `score` over the members of one end.
template <typename Score>
double end_mean(const TropeReport& report, const std::vector<ExtremeEntry>& end, Score score) {
  if (end.empty()) return 0.0;
  double sum = 0.0;
  for (const ExtremeEntry& e : end) sum += score(report.trajectories[e.row].values);
  return sum / static_cast<double>(end.size());
}

void flip(TropeReport& report, std::size_t component) {
  auto row = report.pca.components.row(component);
  for (double& v : row) v = -v;
  for (std::size_t i = 0; i < report.pca.projections.rows(); ++i) {
    report.pca.projections(i, component) = -report.pca.projections(i, component);
  }
  ComponentExtremes& ex = report.extremes[component];
  std::swap(ex.positive, ex.negative);
  for (ExtremeEntry& e : ex.positive) e.projection = -e.projection;
  for (ExtremeEntry& e : ex.negative) e.projection = -e.projection;
}

}  // namespace

void impute_linear(std::span<double> values, const std::vector<bool>& missing) {
  if (missing.size() != values.size()) throw std::invalid_argument("impute: size mismatch");
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!missing[i]) present.push_back(i);
  }
  if (present.empty()) throw std::invalid_argument("impute: no present values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!missing[i]) continue;
    auto after = std::lower_bound(present.begin(), present.end(), i);
    if (after == present.begin()) {
      values[i] = values[present.front()];
    } else if (after == present.end()) {
      values[i] = values[present.back()];
    } else {
      const std::size_t hi = *after;
      const std::size_t lo = *(after - 1);
      const double f = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      values[i] = values[lo] + f * (values[hi] - values[lo]);
    }
  }
}

std::vector<SimilarityTrajectory> build_trajectories(const JointEmbeddingModel& model,
                                                     std::string_view target,
                                                     const TrajectoryFilter& filter) {
  const Vocabulary& vocab = model.vocab();
  const std::size_t T = model.slot_count();
  const WordId tid = vocab.at(target);
  for (std::size_t t = 0; t < T; ++t) {
    if (vocab.slot_count(tid, t) == 0) {
      throw std::invalid_argument(fmt::format("target '{}' does not occur in slot {}", target,
                                              model.slots()[t].label));
    }
  }
  std::vector<std::vector<float>> target_vecs(T);
  for (std::size_t t = 0; t < T; ++t) target_vecs[t] = model.embedding_of(tid, t);

  std::vector<SimilarityTrajectory> out;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto w = static_cast<WordId>(i);
    if (w == tid || vocab.global_count(w) < filter.min_global) continue;
    std::vector<bool> missing(T);
    std::size_t n_missing = 0;
    for (std::size_t t = 0; t < T; ++t) {
      missing[t] = vocab.slot_count(w, t) < filter.min_per_slot;
      n_missing += missing[t] ? 1 : 0;
    }
    if (n_missing > filter.max_missing || n_missing == T) continue;

    SimilarityTrajectory traj;
    traj.target = tid;
    traj.candidate = w;
    traj.values.assign(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      if (!missing[t]) traj.values[t] = linalg::cossim(target_vecs[t], model.embedding_of(w, t));
    }
    impute_linear(traj.values, missing);
    traj.imputed = std::move(missing);
    out.push_back(std::move(traj));
  }
  if (out.empty()) {
    throw DataError(fmt::format("no candidate words qualify for target '{}'", target));
  }
  return out;
}

TropeReport trope_pca(std::vector<SimilarityTrajectory> trajectories, std::size_t q,
                      std::size_t top_k) {
  if (trajectories.size() < q + 1) {
    throw std::invalid_argument(fmt::format("trope PCA with {} components needs at least {} "
                                            "trajectories, got {}",
                                            q, q + 1, trajectories.size()));
  }
  const std::size_t p = trajectories.front().values.size();
  MatrixD x(trajectories.size(), p);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (trajectories[i].values.size() != p) {
      throw std::invalid_argument("trajectories differ in length");
    }
    for (std::size_t j = 0; j < p; ++j) x(i, j) = trajectories[i].values[j];
  }
  TropeReport report;
  report.trajectories = std::move(trajectories);
  report.pca = linalg::pca(x, q);
  report.top_k = top_k;
  for (std::size_t c = 0; c < q; ++c) report.extremes.push_back(extremes_for(report, c));
  return report;
}

TropeReport orient_components(TropeReport report) {
  const std::size_t q = report.extremes.size();
  auto orient = [&](std::size_t component, auto score) {
    ComponentExtremes& ex = report.extremes[component];
    const double pos = end_mean(report, ex.positive, score);
    const double neg = end_mean(report, ex.negative, score);
    ex.orientation_undetermined =
        report.pca.degenerate || ex.positive.empty() || std::abs(pos - neg) <= 1e-12;
    if (!ex.orientation_undetermined && neg > pos) flip(report, component);
  };
  if (q >= 1) orient(0, [](std::span<const double> v) { return mean_of(v); });
  if (q >= 2) orient(1, [](std::span<const double> v) { return slope_of(v); });
  return report;
}

std::string_view trope_class_name(TropeClass c) {
  switch (c) {
    case TropeClass::kHigh:
      return "high";
    case TropeClass::kLow:
      return "low";
    case TropeClass::kRising:
      return "rising";
    case TropeClass::kFalling:
      return "falling";
    case TropeClass::kMixed:
      return "mixed";
  }
  return "unknown";
}

std::vector<TropeClass> classify_trajectory(const TropeReport& report, WordId candidate) {
  const bool known = std::any_of(report.trajectories.begin(), report.trajectories.end(),
                                 [&](const SimilarityTrajectory& t) { return t.candidate == candidate; });
  if (!known) throw std::invalid_argument(fmt::format("candidate {} not in report", candidate));
  auto in = [&](const std::vector<ExtremeEntry>& end) {
    return std::any_of(end.begin(), end.end(),
                       [&](const ExtremeEntry& e) { return e.candidate == candidate; });
  };
  std::vector<TropeClass> labels;
  if (!report.extremes.empty()) {
    if (in(report.extremes[0].positive)) labels.push_back(TropeClass::kHigh);
    if (in(report.extremes[0].negative)) labels.push_back(TropeClass::kLow);
  }
  if (report.extremes.size() >= 2) {
    if (in(report.extremes[1].positive)) labels.push_back(TropeClass::kRising);
    if (in(report.extremes[1].negative)) labels.push_back(TropeClass::kFalling);
  }
  if (labels.empty()) labels.push_back(TropeClass::kMixed);
  return labels;
}

}  // namespace dlkv
