#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hex {

struct CurveSeries {
  std::string label;
  std::vector<double> values;  // one point per episode
};

struct CurvePanel {
  std::string title;
  std::vector<CurveSeries> series;
};

// Grid of line-plot panels, `columns` panels per row, as a standalone SVG
// document.
std::string learning_curve_grid_svg(const std::vector<CurvePanel>& panels, int columns = 3);

// Horizontal bar chart of a signed feature ranking, largest magnitude on top.
std::string ranking_bar_svg(const std::string& title, const std::vector<std::pair<std::string, double>>& ranking);

}  // namespace hex
