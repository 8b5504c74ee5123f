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

// Minimal hand-written SVG charts: grouped box plots and multi-line plots.
// Output is a standalone document with a single titled <g class="plot">.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlkv/stats.hpp"

namespace dlkv::plot {

std::string xml_escape(std::string_view s);

struct BoxGroup {
  std::string name;
  std::vector<DistributionSummary> boxes;  // one per category
};

// Boxes span q1..q3 with a median bar; whiskers run to whisker_lo/hi.
std::string box_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                     std::span<const std::string> categories, std::span<const BoxGroup> groups);

struct LineSeries {
  std::string name;
  std::vector<double> y;  // same length as x
};

std::string line_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                      std::span<const double> x, std::span<const LineSeries> series);

}  // namespace dlkv::plot
