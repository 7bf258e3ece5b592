// Copyright 2026 The crb-compress Authors.
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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "output.hpp"

namespace crbc::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Roughly five round-numbered ticks across [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return out;
}

std::string short_number(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::polyline(const std::vector<Point>& points, const std::string& color, double width,
                       bool closed, double opacity) {
  series_.push_back(Series{points, color, width, closed, opacity, false, {}});
}

void SvgPlot::bars(const std::vector<double>& edges, const std::vector<double>& heights,
                   const std::string& color) {
  Series s{{}, color, 0.0, false, 0.6, true, edges};
  for (std::size_t k = 0; k < heights.size(); ++k) s.points.push_back({edges[k], heights[k]});
  series_.push_back(std::move(s));
}

void SvgPlot::legend(const std::string& label, const std::string& color) {
  legend_.emplace_back(label, color);
}

std::string SvgPlot::render() const {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series_) {
    for (const auto& p : s.points) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
    if (s.is_bars) {
      x0 = std::min(x0, s.edges.front());
      x1 = std::max(x1, s.edges.back());
      y0 = std::min(y0, 0.0);
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  const double pad_y = 0.05 * (y1 - y0);
  y1 += pad_y;
  if (y0 != 0.0) y0 -= pad_y;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  if (equal_aspect_) {
    const double scale = std::max((x1 - x0) / plot_w, (y1 - y0) / plot_h);
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    x0 = cx - 0.5 * scale * plot_w;
    x1 = cx + 0.5 * scale * plot_w;
    y0 = cy - 0.5 * scale * plot_h;
    y1 = cy + 0.5 * scale * plot_h;
  }
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * plot_w; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title_) << "</text>\n";

  for (const auto& s : series_) {
    if (s.is_bars) {
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        const double left = sx(s.edges[k]), right = sx(s.edges[k + 1]);
        const double top = sy(s.points[k][1]), base = sy(std::max(y0, 0.0));
        os << "<rect x=\"" << format_number(left) << "\" y=\"" << format_number(top) << "\" width=\""
           << format_number(right - left) << "\" height=\"" << format_number(base - top)
           << "\" fill=\"" << s.color << "\" fill-opacity=\"" << s.opacity << "\"/>\n";
      }
      continue;
    }
    os << "<" << (s.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"" << s.width << "\" stroke-opacity=\"" << s.opacity << "\" points=\"";
    for (const auto& p : s.points) os << format_number(sx(p[0])) << ',' << format_number(sy(p[1])) << ' ';
    os << "\"/>\n";
  }

  // Axes box, ticks and labels.
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x0, x1)) {
    os << "<line x1=\"" << format_number(sx(t)) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
       << format_number(sx(t)) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << format_number(sx(t)) << "\" y=\"" << kTop + plot_h + 18
       << "\" text-anchor=\"middle\">" << short_number(t) << "</text>\n";
  }
  for (double t : ticks(y0, y1)) {
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << format_number(sy(t)) << "\" x2=\"" << kLeft
       << "\" y2=\"" << format_number(sy(t)) << "\" stroke=\"black\"/>"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << format_number(sy(t) + 4)
       << "\" text-anchor=\"end\">" << short_number(t) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(x_label_) << "</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << kTop + plot_h / 2 << ")\">" << escape(y_label_) << "</text>\n";

  double ly = kTop + 16;
  for (const auto& [label, color] : legend_) {
    const double lx = kLeft + plot_w - 170;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>"
       << "<text x=\"" << lx + 30 << "\" y=\"" << ly << "\">" << escape(label) << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace crbc::cli
