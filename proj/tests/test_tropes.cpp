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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "dlkv/error.hpp"
#include "model_builder.hpp"
#include "trope_fixture.hpp"

using namespace dlkv;
using namespace dlkv::testing;

namespace {

std::set<WordId> members(const std::vector<ExtremeEntry>& end) {
  std::set<WordId> s;
  for (const ExtremeEntry& e : end) s.insert(e.candidate);
  return s;
}

}  // namespace

TEST_CASE("linear imputation fills interior and edge gaps") {
  std::vector<double> v = {0.0, 1.0, -7.0, 3.0, -7.0};
  impute_linear(v, {false, false, true, false, true});
  CHECK(v[2] == doctest::Approx(2.0));
  CHECK(v[4] == doctest::Approx(3.0));
  std::vector<double> w = {-1.0, -1.0, 0.2, 0.8};
  impute_linear(w, {true, true, false, false});
  CHECK(w[0] == 0.2);
  CHECK(w[1] == 0.2);
  std::vector<double> gap = {1.0, 0.0, 0.0, 4.0};
  impute_linear(gap, {false, true, true, false});
  CHECK(gap[1] == doctest::Approx(2.0));
  CHECK(gap[2] == doctest::Approx(3.0));
  std::vector<double> none = {1.0, 2.0};
  CHECK_THROWS_AS(impute_linear(none, {true, true}), std::invalid_argument);
  CHECK_THROWS_AS(impute_linear(none, {true}), std::invalid_argument);
}

TEST_CASE("trajectory filter admits one missing slot and imputes it") {
  JointEmbeddingModel m = manual_model({{"liebe", {9, 9, 9, 9, 9, 9}},
                                        {"herz", {5, 5, 0, 5, 5, 5}},
                                        {"schmerz", {5, 0, 0, 5, 5, 5}},
                                        {"rar", {1, 1, 1, 1, 1, 1}},
                                        {"treu", {6, 6, 6, 6, 6, 6}}},
                                       2, fixed_slots(6));
  for (std::size_t s = 0; s < 6; ++s) {
    set_vector(m, 0, s, {1, 0});
    set_vector(m, 1, s, {1, static_cast<float>(s)});
    set_vector(m, 2, s, {0, 1});
    set_vector(m, 3, s, {1, 1});
    set_vector(m, 4, s, {1, 0});
  }
  TrajectoryFilter f;
  f.min_global = 6;
  f.min_per_slot = 2;
  f.max_missing = 1;
  const auto traj = build_trajectories(m, "liebe", f);
  REQUIRE(traj.size() == 2);
  CHECK(traj[0].candidate == 1);
  CHECK(traj[1].candidate == 4);
  CHECK(traj[0].imputed == std::vector<bool>{false, false, true, false, false, false});
  const double c1 = 1.0 / std::sqrt(2.0);
  const double c3 = 1.0 / std::sqrt(10.0);
  CHECK(traj[0].values[2] == doctest::Approx((c1 + c3) / 2.0));
  for (double v : traj[1].values) CHECK(v == doctest::Approx(1.0));

  f.max_missing = 2;
  CHECK(build_trajectories(m, "liebe", f).size() == 3);

  // Raising min_global never admits more candidates.
  std::size_t prev = 100;
  for (std::uint64_t g : {0, 6, 20, 25, 30, 36, 37}) {
    f.min_global = g;
    std::size_t n = 0;
    try {
      n = build_trajectories(m, "liebe", f).size();
    } catch (const DataError&) {
      n = 0;
    }
    CHECK(n <= prev);
    prev = n;
  }
  CHECK(prev == 0);

  CHECK_THROWS_AS(build_trajectories(m, "fehlt", f), std::invalid_argument);
  CHECK_THROWS_AS(build_trajectories(m, "herz", f), std::invalid_argument);
}

TEST_CASE("planted shapes land at the oriented component ends") {
  const std::size_t per = 10;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TropeReport r = orient_components(trope_pca(shaped_trajectories(per, 6, 0.02, seed), 4, per));
    REQUIRE(r.extremes.size() == 4);
    for (TropeClass c : {TropeClass::kHigh, TropeClass::kLow, TropeClass::kRising, TropeClass::kFalling}) {
      const ComponentExtremes& ex = r.extremes[(c == TropeClass::kHigh || c == TropeClass::kLow) ? 0 : 1];
      const auto& end = (c == TropeClass::kHigh || c == TropeClass::kRising) ? ex.positive : ex.negative;
      REQUIRE(end.size() == per);
      for (const ExtremeEntry& e : end) CHECK(shape_of(e.row) == expected_shape(c));
    }
    CHECK_FALSE(r.extremes[0].orientation_undetermined);
    CHECK_FALSE(r.extremes[1].orientation_undetermined);
    for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
      const auto labels = classify_trajectory(r, r.trajectories[i].candidate);
      REQUIRE(labels.size() == 1);
      CHECK(expected_shape(labels[0]) == shape_of(i));
    }
  }
}

TEST_CASE("orientation does not depend on the PCA sign") {
  TropeReport r = trope_pca(shaped_trajectories(8, 6, 0.02, 9), 2, 8);
  TropeReport flipped = r;
  for (std::size_t c = 0; c < 2; ++c) {
    for (double& v : flipped.pca.components.row(c)) v = -v;
    for (std::size_t i = 0; i < flipped.pca.projections.rows(); ++i) {
      flipped.pca.projections(i, c) = -flipped.pca.projections(i, c);
    }
    std::swap(flipped.extremes[c].positive, flipped.extremes[c].negative);
    for (auto* end : {&flipped.extremes[c].positive, &flipped.extremes[c].negative}) {
      for (ExtremeEntry& e : *end) e.projection = -e.projection;
    }
  }
  const TropeReport a = orient_components(r);
  const TropeReport b = orient_components(flipped);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(members(a.extremes[c].positive) == members(b.extremes[c].positive));
    CHECK(members(a.extremes[c].negative) == members(b.extremes[c].negative));
    for (std::size_t i = 0; i < a.pca.projections.rows(); ++i) {
      CHECK(a.pca.projections(i, c) == doctest::Approx(b.pca.projections(i, c)));
    }
  }
}

TEST_CASE("extreme lists are disjoint and capped") {
  for (std::size_t n : {5, 6, 7, 12, 60}) {
    std::vector<SimilarityTrajectory> t = shaped_trajectories(n, 5, 0.05, n);
    t.resize(n);
    TropeReport r = trope_pca(t, 2, 25);
    for (const ComponentExtremes& ex : r.extremes) {
      CHECK(ex.positive.size() == std::min<std::size_t>(25, n / 2));
      CHECK(ex.negative.size() == ex.positive.size());
      const auto pos = members(ex.positive);
      for (WordId w : members(ex.negative)) CHECK(pos.count(w) == 0);
      for (std::size_t i = 1; i < ex.positive.size(); ++i) {
        CHECK(ex.positive[i - 1].projection >= ex.positive[i].projection);
        CHECK(ex.negative[i - 1].projection <= ex.negative[i].projection);
      }
    }
  }
}

TEST_CASE("reordering the input rows keeps the extreme sets") {
  std::vector<SimilarityTrajectory> t = shaped_trajectories(6, 6, 0.03, 21);
  const TropeReport a = orient_components(trope_pca(t, 3, 6));
  std::reverse(t.begin(), t.end());
  std::rotate(t.begin(), t.begin() + 5, t.end());
  const TropeReport b = orient_components(trope_pca(t, 3, 6));
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(members(a.extremes[c].positive) == members(b.extremes[c].positive));
    CHECK(members(a.extremes[c].negative) == members(b.extremes[c].negative));
  }
}

TEST_CASE("identical trajectories leave orientation undetermined") {
  std::vector<SimilarityTrajectory> t = shaped_trajectories(3, 6, 0.0, 1);
  for (auto& tr : t) tr.values.assign(6, 0.4);
  const TropeReport r = orient_components(trope_pca(t, 2, 3));
  CHECK(r.pca.degenerate);
  CHECK(r.extremes[0].orientation_undetermined);
  CHECK(r.extremes[1].orientation_undetermined);
}

TEST_CASE("trope errors and labels") {
  CHECK_THROWS_AS(trope_pca(shaped_trajectories(1, 6, 0.0, 1), 4, 2), std::invalid_argument);
  std::vector<SimilarityTrajectory> t = shaped_trajectories(2, 6, 0.01, 1);
  t[3].values.pop_back();
  CHECK_THROWS_AS(trope_pca(t, 2, 2), std::invalid_argument);
  const TropeReport r = trope_pca(shaped_trajectories(2, 6, 0.01, 1), 2, 1);
  CHECK_THROWS_AS(classify_trajectory(r, 999), std::invalid_argument);
  CHECK(trope_class_name(TropeClass::kRising) == "rising");
  CHECK(trope_class_name(TropeClass::kMixed) == "mixed");
  // With top_k 1 most candidates are in no list.
  std::size_t mixed = 0;
  for (const auto& tr : r.trajectories) {
    if (classify_trajectory(r, tr.candidate) == std::vector<TropeClass>{TropeClass::kMixed}) ++mixed;
  }
  CHECK(mixed >= 4);
}
