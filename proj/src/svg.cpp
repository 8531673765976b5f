#include "hex/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hex {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
constexpr int kPanelWidth = 320;
constexpr int kPanelHeight = 220;
constexpr int kMargin = 36;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string label_number(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

void draw_panel(std::ostringstream& svg, const CurvePanel& panel, int ox, int oy) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t longest = 0;
  for (const auto& s : panel.series) {
    longest = std::max(longest, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double plot_w = kPanelWidth - 2 * kMargin;
  const double plot_h = kPanelHeight - 2 * kMargin;
  const double x0 = ox + kMargin;
  const double y0 = oy + kMargin;

  svg << "<g>\n";
  svg << "<text x=\"" << ox + kPanelWidth / 2 << "\" y=\"" << oy + 20
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(panel.title) << "</text>\n";
  svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  svg << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 + 4 << "\" text-anchor=\"end\" font-size=\"9\">"
      << label_number(hi) << "</text>\n";
  svg << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 + plot_h << "\" text-anchor=\"end\" font-size=\"9\">"
      << label_number(lo) << "</text>\n";
  svg << "<text x=\"" << x0 + plot_w << "\" y=\"" << y0 + plot_h + 12 << "\" text-anchor=\"end\" font-size=\"9\">"
      << longest << "</text>\n";

  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const auto& s = panel.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    if (!s.values.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
      const double denom = longest > 1 ? static_cast<double>(longest - 1) : 1.0;
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!std::isfinite(s.values[i])) continue;
        const double px = x0 + plot_w * static_cast<double>(i) / denom;
        const double py = y0 + plot_h * (hi - s.values[i]) / (hi - lo);
        svg << std::fixed << std::setprecision(2) << px << ',' << py << ' ';
      }
      svg << std::defaultfloat << "\"/>\n";
    }
    svg << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 + 12 + 11 * static_cast<int>(k) << "\" font-size=\"9\" fill=\""
        << color << "\">" << escape(s.label) << "</text>\n";
  }
  svg << "</g>\n";
}

}  // namespace

std::string learning_curve_grid_svg(const std::vector<CurvePanel>& panels, int columns) {
  if (columns < 1) throw std::invalid_argument("columns must be positive");
  const int cols = std::max(1, std::min<int>(columns, static_cast<int>(panels.size())));
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * kPanelWidth << "\" height=\""
      << std::max(1, rows) * kPanelHeight << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int r = static_cast<int>(i) / cols;
    const int c = static_cast<int>(i) % cols;
    draw_panel(svg, panels[i], c * kPanelWidth, r * kPanelHeight);
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string ranking_bar_svg(const std::string& title, const std::vector<std::pair<std::string, double>>& ranking) {
  constexpr int kWidth = 480;
  constexpr int kBar = 22;
  constexpr int kLabel = 140;
  const int height = 50 + kBar * static_cast<int>(ranking.size());
  double scale = 0.0;
  for (const auto& [name, v] : ranking) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  const double half = (kWidth - kLabel - 20) / 2.0;
  const double axis = kLabel + half;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
      << "</text>\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& [name, v] = ranking[i];
    const int y = 36 + kBar * static_cast<int>(i);
    const double len = half * std::abs(v) / scale;
    const double x = v >= 0.0 ? axis : axis - len;
    svg << "<text x=\"" << kLabel - 6 << "\" y=\"" << y + 14 << "\" text-anchor=\"end\" font-size=\"11\">"
        << escape(name) << "</text>\n";
    svg << "<rect class=\"bar\" x=\"" << std::fixed << std::setprecision(2) << x << "\" y=\"" << y + 3
        << "\" width=\"" << len << "\" height=\"" << kBar - 6 << "\" fill=\"" << (v >= 0.0 ? "#2ca02c" : "#d62728")
        << "\"/>\n"
        << std::defaultfloat;
    svg << "<text x=\"" << kWidth - 4 << "\" y=\"" << y + 14 << "\" text-anchor=\"end\" font-size=\"10\">"
        << label_number(v) << "</text>\n";
  }
  svg << "<line x1=\"" << axis << "\" y1=\"30\" x2=\"" << axis << "\" y2=\"" << height - 8
      << "\" stroke=\"#444\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hex
