#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ghostfd::app {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Minimal standalone SVG line/scatter chart. Non-positive values are dropped on log axes.
[[nodiscard]] std::string render_svg(const PlotSpec& spec, int width = 720, int height = 480);

}  // namespace ghostfd::app
