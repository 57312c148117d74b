// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace jumpsde::cli {

struct PlotSeries {
    std::string name;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    /// Vertical guide lines (jump times).
    std::vector<double> markers;
};

/// Static line chart with axes, ticks and a legend. Non-finite points break
/// the polyline.
std::string render_svg(const Plot& plot);

}  // namespace jumpsde::cli
