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

#pragma once

#include <array>
#include <string>
#include <vector>

namespace crbc::cli {

/// Minimal line/bar chart written straight to SVG markup. Data coordinates
/// are mapped linearly onto the plot area; the CSV files remain the ground
/// truth and this is only a rendering of them.
class SvgPlot {
 public:
  using Point = std::array<double, 2>;

  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void polyline(const std::vector<Point>& points, const std::string& color, double width = 1.5,
                bool closed = false, double opacity = 1.0);
  /// Bars between consecutive edges with the given heights.
  void bars(const std::vector<double>& edges, const std::vector<double>& heights,
            const std::string& color);
  void legend(const std::string& label, const std::string& color);
  /// Forces equal scaling on both axes (for ellipses).
  void set_equal_aspect(bool on) { equal_aspect_ = on; }

  std::string render() const;

 private:
  struct Series {
    std::vector<Point> points;
    std::string color;
    double width;
    bool closed;
    double opacity;
    bool is_bars;
    std::vector<double> edges;
  };

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  std::vector<std::pair<std::string, std::string>> legend_;
  bool equal_aspect_ = false;
};

}  // namespace crbc::cli
