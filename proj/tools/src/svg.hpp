#pragma once

#include <string>
#include <vector>

namespace bolza::cli {

struct PlotLabels {
    std::string title;
    std::string x;
    std::string y;
};

/// Polyline of (xs, ys) on linear axes. Non-finite ys break the line.
std::string svgLinePlot(const std::vector<double>& xs, const std::vector<double>& ys, const PlotLabels& labels);

/// Heatmap of values[i * ny + j] over the cell grid xs x ys; non-finite
/// cells are left blank.
std::string svgHeatmap(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& values,
                       const PlotLabels& labels);

}  // namespace bolza::cli
