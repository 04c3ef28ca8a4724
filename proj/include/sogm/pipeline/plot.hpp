#pragma once

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sogm/common/io_util.hpp"

namespace sogm {

// Minimal SVG box plot over grouped values (per-scene scores). Whiskers at
// min/max, box at the quartiles, line at the median. The CSV stays the
// contract; this is a convenience rendering only.
inline std::string box_plot_svg(
    const std::vector<std::pair<std::string, std::vector<double>>>& groups,
    const std::string& y_label) {
  const int width = 120 * std::max<std::size_t>(1, groups.size()) + 80;
  const int height = 360;
  const double plot_left = 60.0, plot_right = width - 20.0;
  const double plot_top = 20.0, plot_bottom = height - 50.0;

  double lo = 1e300, hi = -1e300;
  for (const auto& [name, values] : groups)
    for (const double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) {
    lo -= 0.05;
    hi += 0.05;
  }
  const double pad = (hi - lo) * 0.08;
  lo -= pad;
  hi += pad;
  const auto y_of = [&](double v) {
    return plot_bottom - (v - lo) / (hi - lo) * (plot_bottom - plot_top);
  };

  const auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    const double f = pos - static_cast<double>(i);
    return v[i] * (1.0 - f) + v[i + 1] * f;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int grid = 0; grid <= 5; ++grid) {
    const double v = lo + (hi - lo) * grid / 5.0;
    const double y = y_of(v);
    svg << "<line x1=\"" << plot_left << "\" y1=\"" << y << "\" x2=\"" << plot_right
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << plot_left - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_real(v).substr(0, 6)
        << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << (plot_top + plot_bottom) / 2.0
      << "\" font-size=\"12\" transform=\"rotate(-90 14 " << (plot_top + plot_bottom) / 2.0
      << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

  const double slot = (plot_right - plot_left) / static_cast<double>(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& values = groups[g].second;
    if (values.empty()) continue;
    const double cx = plot_left + slot * (static_cast<double>(g) + 0.5);
    const double box_w = std::min(60.0, slot * 0.5);
    const double q1 = quantile(values, 0.25), q2 = quantile(values, 0.5),
                 q3 = quantile(values, 0.75);
    const double vmin = *std::min_element(values.begin(), values.end());
    const double vmax = *std::max_element(values.begin(), values.end());
    svg << "<line x1=\"" << cx << "\" y1=\"" << y_of(vmin) << "\" x2=\"" << cx
        << "\" y2=\"" << y_of(vmax) << "\" stroke=\"black\" stroke-dasharray=\"3 2\"/>\n";
    svg << "<rect x=\"" << cx - box_w / 2 << "\" y=\"" << y_of(q3) << "\" width=\"" << box_w
        << "\" height=\"" << y_of(q1) - y_of(q3) << "\" fill=\"#9ecae9\" stroke=\"blue\"/>\n";
    svg << "<line x1=\"" << cx - box_w / 2 << "\" y1=\"" << y_of(q2) << "\" x2=\""
        << cx + box_w / 2 << "\" y2=\"" << y_of(q2) << "\" stroke=\"red\"/>\n";
    svg << "<text x=\"" << cx << "\" y=\"" << plot_bottom + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << groups[g].first << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline void save_box_plot(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                          const std::string& y_label, const std::filesystem::path& path) {
  write_file_text(path, box_plot_svg(groups, y_label));
}

}  // namespace sogm
