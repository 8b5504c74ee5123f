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

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dlkv::plot {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 70.0;
constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Pads a flat or empty range so the mapping stays finite.
  void settle() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.05;
    lo -= pad;
    hi += pad;
  }
};

class Canvas {
 public:
  Canvas(std::string_view title, Range y) : y_(y) {
    out_ = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<g class=\"plot\">\n<title>{2}</title>\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
        "<text x=\"{3}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{2}</text>\n",
        kWidth, kHeight, xml_escape(title), kLeft + plot_w() / 2.0);
  }

  static double plot_w() { return kWidth - kLeft - kRight; }
  static double plot_h() { return kHeight - kTop - kBottom; }

  double ypix(double v) const { return kTop + plot_h() * (y_.hi - v) / (y_.hi - y_.lo); }

  void axes(std::string_view x_label, std::string_view y_label) {
    append("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
           kTop + plot_h());
    append("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft,
           kTop + plot_h(), kLeft + plot_w());
    for (int i = 0; i <= 5; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 5.0;
      const double y = ypix(v);
      append("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n", kLeft,
             y, kLeft + plot_w());
      append("<text x=\"{0}\" y=\"{1:.2f}\" text-anchor=\"end\">{2:.3f}</text>\n", kLeft - 6, y + 4, v);
    }
    append("<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\">{2}</text>\n", kLeft + plot_w() / 2.0,
           kHeight - 15, xml_escape(x_label));
    append("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
           kTop + plot_h() / 2.0, xml_escape(y_label));
  }

  void x_tick(double x, std::string_view label) {
    append("<text x=\"{0:.2f}\" y=\"{1}\" text-anchor=\"end\" transform=\"rotate(-35 {0:.2f} {1})\">{2}</text>\n",
           x, kTop + plot_h() + 16, xml_escape(label));
  }

  void legend(std::size_t index, std::string_view name, const char* color) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(index);
    const double x = kLeft + plot_w() + 12;
    append("<rect x=\"{0}\" y=\"{1}\" width=\"12\" height=\"12\" fill=\"{2}\"/>\n", x, y - 10, color);
    append("<text x=\"{0}\" y=\"{1}\">{2}</text>\n", x + 18, y, xml_escape(name));
  }

  template <typename... Args>
  void append(fmt::format_string<Args...> f, Args&&... args) {
    out_ += fmt::format(f, std::forward<Args>(args)...);
  }

  std::string finish() {
    out_ += "</g>\n</svg>\n";
    return std::move(out_);
  }

 private:
  Range y_;
  std::string out_;
};

}  // namespace

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string box_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                     std::span<const std::string> categories, std::span<const BoxGroup> groups) {
  Range range;
  for (const BoxGroup& g : groups) {
    if (g.boxes.size() != categories.size()) {
      throw std::invalid_argument("box_plot: group size does not match categories");
    }
    for (const DistributionSummary& s : g.boxes) {
      range.add(s.whisker_lo);
      range.add(s.whisker_hi);
    }
  }
  range.settle();
  Canvas c(title, range);
  c.axes(x_label, y_label);

  const double slot_w = Canvas::plot_w() / static_cast<double>(std::max<std::size_t>(1, categories.size()));
  const double box_w = 0.7 * slot_w / static_cast<double>(std::max<std::size_t>(1, groups.size()));
  for (std::size_t k = 0; k < categories.size(); ++k) {
    c.x_tick(kLeft + slot_w * (k + 0.5), categories[k]);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const char* color = kPalette[g % kPalette.size()];
    if (groups.size() > 1 || !groups[g].name.empty()) c.legend(g, groups[g].name, color);
    for (std::size_t k = 0; k < categories.size(); ++k) {
      const DistributionSummary& s = groups[g].boxes[k];
      if (s.n == 0) continue;
      const double x0 = kLeft + slot_w * (k + 0.15) + box_w * static_cast<double>(g);
      const double xm = x0 + box_w / 2.0;
      c.append("<g class=\"box\"><title>{} n={} median={:.4f}</title>\n", xml_escape(categories[k]),
               s.n, s.median);
      c.append("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n", xm,
               c.ypix(s.whisker_hi), c.ypix(s.q3), color);
      c.append("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n", xm,
               c.ypix(s.q1), c.ypix(s.whisker_lo), color);
      c.append("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
               "fill-opacity=\"0.3\" stroke=\"{}\"/>\n",
               x0, c.ypix(s.q3), box_w, std::max(0.5, c.ypix(s.q1) - c.ypix(s.q3)), color, color);
      c.append("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\" "
               "stroke-width=\"2\"/>\n</g>\n",
               x0, c.ypix(s.median), x0 + box_w);
    }
  }
  return c.finish();
}

std::string line_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                      std::span<const double> x, std::span<const LineSeries> series) {
  Range range;
  for (const LineSeries& s : series) {
    if (s.y.size() != x.size()) throw std::invalid_argument("line_plot: series length mismatch");
    for (double v : s.y) range.add(v);
  }
  range.settle();
  Range xr;
  for (double v : x) xr.add(v);
  if (xr.lo > xr.hi) {
    xr.lo = 0.0;
    xr.hi = 1.0;
  } else if (xr.lo == xr.hi) {
    xr.lo -= 1.0;
    xr.hi += 1.0;
  }
  auto xpix = [&](double v) { return kLeft + Canvas::plot_w() * (v - xr.lo) / (xr.hi - xr.lo); };

  Canvas c(title, range);
  c.axes(x_label, y_label);
  for (double v : x) c.x_tick(xpix(v), fmt::format("{:g}", v));
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    c.legend(i, series[i].name, color);
    std::string points;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", xpix(x[j]), c.ypix(series[i].y[j]));
    }
    c.append("<polyline class=\"series\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\">"
             "<title>{}</title></polyline>\n",
             color, points, xml_escape(series[i].name));
  }
  return c.finish();
}

}  // namespace dlkv::plot
