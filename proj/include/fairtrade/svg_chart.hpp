#pragma once

#include <string>
#include <vector>

namespace fairtrade {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

/// Static line chart. NaN points break a series into separate segments.
struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<Series> series;
};

/// Renders the chart as a standalone SVG document. Output depends only on the
/// chart contents, so identical inputs give identical bytes. Throws DataError
/// when no series has a finite point.
std::string render_svg(const LineChart& chart);

/// Axis range padded by 5% of the span of the finite values in `series`,
/// along x (`along_x`) or y. Falls back to [0, 1] for no data.
std::pair<double, double> padded_range(const std::vector<Series>& series, bool along_x);

} // namespace fairtrade
