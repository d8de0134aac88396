#include "aglab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace aglab::analysis {

namespace {

std::string rgb(double r, double g, double b) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r * 255),
                static_cast<int>(g * 255), static_cast<int>(b * 255));
  return buf;
}

// value in [-1, 1] -> blue (neg) .. white .. red (pos)
std::string diverging_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  if (v >= 0) return rgb(1.0, 1.0 - v, 1.0 - v);
  return rgb(1.0 + v, 1.0 + v, 1.0);
}

}  // namespace

std::string heatmap_svg(const num::Matrix& m, const std::string& title) {
  const double cell = std::max(2.0, std::min(24.0, 640.0 / std::max(m.rows(), m.cols())));
  const double margin = 28.0;
  const double w = margin * 2 + cell * static_cast<double>(m.cols());
  const double h = margin * 2 + cell * static_cast<double>(m.rows());
  const double scale = m.max_abs() > 0 ? m.max_abs() : 1.0;

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", w,
                h);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"18\" font-size=\"12\" font-family=\"sans-serif\">%s "
                "(scale ±%.3g)</text>\n",
                margin, title.c_str(), scale);
  out += buf;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                    margin + cell * static_cast<double>(c),
                    margin + cell * static_cast<double>(r), cell, cell,
                    diverging_color(m(r, c) / scale).c_str());
      out += buf;
    }
  out += "</svg>\n";
  return out;
}

std::string scatter_svg(const std::vector<ScatterSeries>& series, const std::string& title,
                        const std::string& x_label, const std::string& y_label) {
  const double size = 360.0, margin = 44.0;
  const double span = size - 2 * margin;
  auto px = [&](double x) { return margin + x * span; };
  auto py = [&](double y) { return size - margin - y * span; };

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n",
                size, size + 16.0 * static_cast<double>(series.size()));
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"18\" font-size=\"12\" font-family=\"sans-serif\">%s"
                "</text>\n",
                margin, title.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                px(0.0), py(1.0), span, span);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" font-size=\"10\" font-family=\"sans-serif\">%s"
                "</text>\n",
                px(0.35), size - 8.0, x_label.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"12\" y=\"%.0f\" font-size=\"10\" font-family=\"sans-serif\" "
                "transform=\"rotate(-90 12 %.0f)\">%s</text>\n",
                py(0.3), py(0.3), y_label.c_str());
  out += buf;
  for (double tick = 0.0; tick <= 1.001; tick += 0.5) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"%.0f\" font-size=\"8\" font-family=\"sans-serif\">"
                  "%.1f</text>\n",
                  px(tick) - 6, size - margin + 12, tick);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"%.0f\" font-size=\"8\" font-family=\"sans-serif\">"
                  "%.1f</text>\n",
                  margin - 20, py(tick) + 3, tick);
    out += buf;
  }
  double legend_y = size - 4.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\" fill-opacity=\"0.6\"/>\n",
                    px(std::clamp(x, 0.0, 1.0)), py(std::clamp(y, 0.0, 1.0)), s.color.c_str());
      out += buf;
    }
    legend_y += 14.0;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.0f\" cy=\"%.0f\" r=\"3\" fill=\"%s\"/><text x=\"%.0f\" "
                  "y=\"%.0f\" font-size=\"10\" font-family=\"sans-serif\">%s</text>\n",
                  margin, legend_y, s.color.c_str(), margin + 8, legend_y + 3, s.label.c_str());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace aglab::analysis
