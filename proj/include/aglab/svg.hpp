#pragma once

#include <string>
#include <vector>

#include "aglab/matrix.hpp"

namespace aglab::analysis {

/// Diverging blue-white-red heatmap, one rect per cell.
std::string heatmap_svg(const num::Matrix& m, const std::string& title);

/// Scatter of (x, y) points in [0,1]^2 with axes, e.g. left- vs
/// right-saturation per gate unit.
struct ScatterSeries {
  std::string label;
  std::string color;  // css color
  std::vector<std::pair<double, double>> points;
};

std::string scatter_svg(const std::vector<ScatterSeries>& series, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

}  // namespace aglab::analysis
