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

#include "dlkv/plot.hpp"

#include <stack>
#include <stdexcept>
#include <string>

#include "doctest.h"

using namespace dlkv;

namespace {

// Minimal well-formedness check: tags nest and close, attributes are quoted.
bool well_formed(const std::string& svg) {
  std::stack<std::string> open;
  std::size_t i = 0;
  while ((i = svg.find('<', i)) != std::string::npos) {
    const std::size_t end = svg.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = svg.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    if (tag[0] == '/') {
      if (open.empty() || open.top() != tag.substr(1)) return false;
      open.pop();
      continue;
    }
    open.push(tag.substr(0, tag.find(' ')));
  }
  return open.empty();
}

DistributionSummary box(double lo, double hi) {
  DistributionSummary s;
  s.whisker_lo = lo;
  s.q1 = lo + (hi - lo) * 0.25;
  s.median = (lo + hi) / 2;
  s.q3 = lo + (hi - lo) * 0.75;
  s.whisker_hi = hi;
  s.mean = s.median;
  s.n = 10;
  return s;
}

}  // namespace

TEST_CASE("xml escaping") {
  CHECK(plot::xml_escape("a<b & \"c\" 'd'>") == "a&lt;b &amp; &quot;c&quot; &apos;d&apos;&gt;");
}

TEST_CASE("box plot is a titled, well-formed SVG") {
  const std::vector<std::string> cats = {"1600-1650", "1650<1700"};
  const std::vector<plot::BoxGroup> groups = {{"low", {box(0.1, 0.5), box(0.2, 0.9)}},
                                              {"high", {box(0.3, 0.6), DistributionSummary{}}}};
  const std::string svg = plot::box_plot("Self & similarity", "slot", "cosine", cats, groups);
  CHECK(well_formed(svg));
  CHECK(svg.find("<title>Self &amp; similarity</title>") != std::string::npos);
  CHECK(svg.find("1650&lt;1700") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  const std::vector<plot::BoxGroup> wrong = {{"x", {box(0, 1)}}};
  CHECK_THROWS_AS(plot::box_plot("t", "x", "y", cats, wrong), std::invalid_argument);
}

TEST_CASE("line plot handles flat and single-point series") {
  const std::vector<double> x = {1600};
  const std::vector<plot::LineSeries> s = {{"flat", {0.5}}};
  const std::string svg = plot::line_plot("Flat", "year", "cosine", x, s);
  CHECK(well_formed(svg));
  CHECK(svg.find("<title>Flat</title>") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
  const std::vector<double> x2 = {1, 2, 3};
  const std::vector<plot::LineSeries> s2 = {{"a", {0.1, 0.2, 0.3}}, {"b", {0.3, 0.2, 0.1}}};
  const std::string svg2 = plot::line_plot("Two", "slot", "value", x2, s2);
  CHECK(well_formed(svg2));
  std::size_t lines = 0;
  for (std::size_t p = 0; (p = svg2.find("<polyline", p)) != std::string::npos; ++p) ++lines;
  CHECK(lines == 2);
  CHECK_THROWS_AS(plot::line_plot("t", "x", "y", x, s2), std::invalid_argument);
}
