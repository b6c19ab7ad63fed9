#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppgd::cli {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Small self-contained SVG line plot; enough for the convergence figures.
// Log-scale plots silently skip non-positive values.
inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           const std::vector<PlotSeries>& series, bool log_y) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double width = 820, height = 560;
  const double ml = 80, mr = 160, mt = 50, mb = 60;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (log_y && !(y > 0.0)) continue;
      const double yy = log_y ? std::log10(y) : y;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, yy);
      ymax = std::max(ymax, yy);
    }
  if (!(xmin <= xmax) || !(ymin <= ymax)) {
    // nothing plottable (e.g. a log plot of an all-zero series): keep the
    // frame so downstream tooling still finds the file
    xmin = 0.0;
    xmax = 1.0;
    ymin = log_y ? -1.0 : 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) {
    const double yy = log_y ? std::log10(y) : y;
    return mt + (1.0 - (yy - ymin) / (ymax - ymin)) * ph;
  };

  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_svg_plot: cannot open " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "' viewBox='0 0 " << width << " " << height << "'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n"
     << "<text x='" << width / 2 << "' y='28' text-anchor='middle' font-size='18'>" << title
     << "</text>\n";

  // axes
  os << "<line x1='" << ml << "' y1='" << mt + ph << "' x2='" << ml + pw << "' y2='" << mt + ph
     << "' stroke='black'/>\n"
     << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << mt + ph
     << "' stroke='black'/>\n";

  // x ticks (5 divisions)
  for (int t = 0; t <= 5; ++t) {
    const double x = xmin + (xmax - xmin) * t / 5.0;
    os << "<line x1='" << px(x) << "' y1='" << mt + ph << "' x2='" << px(x) << "' y2='"
       << mt + ph + 5 << "' stroke='black'/>\n"
       << "<text x='" << px(x) << "' y='" << mt + ph + 20
       << "' text-anchor='middle' font-size='12'>" << static_cast<long>(std::lround(x))
       << "</text>\n";
  }
  // y ticks: powers of ten when logarithmic, else 5 divisions
  if (log_y) {
    for (int e = static_cast<int>(std::floor(ymin)); e <= static_cast<int>(std::ceil(ymax));
         ++e) {
      if (e < ymin - 1e-9 || e > ymax + 1e-9) continue;
      const double y = std::pow(10.0, e);
      os << "<line x1='" << ml - 5 << "' y1='" << py(y) << "' x2='" << ml + pw << "' y2='"
         << py(y) << "' stroke='#dddddd'/>\n"
         << "<text x='" << ml - 8 << "' y='" << py(y) + 4
         << "' text-anchor='end' font-size='12'>1e" << e << "</text>\n";
    }
  } else {
    for (int t = 0; t <= 5; ++t) {
      const double yy = ymin + (ymax - ymin) * t / 5.0;
      const double ypix = mt + (1.0 - static_cast<double>(t) / 5.0) * ph;
      os << "<line x1='" << ml - 5 << "' y1='" << ypix << "' x2='" << ml + pw << "' y2='"
         << ypix << "' stroke='#dddddd'/>\n"
         << "<text x='" << ml - 8 << "' y='" << ypix + 4
         << "' text-anchor='end' font-size='12'>" << yy << "</text>\n";
    }
  }

  os << "<text x='" << ml + pw / 2 << "' y='" << height - 15
     << "' text-anchor='middle' font-size='14'>" << x_label << "</text>\n"
     << "<text x='20' y='" << mt + ph / 2 << "' text-anchor='middle' font-size='14' "
     << "transform='rotate(-90 20 " << mt + ph / 2 << ")'>" << y_label << "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    const char* c = kPalette[color % 8];
    os << "<polyline fill='none' stroke='" << c << "' stroke-width='1.5' points='";
    for (auto [x, y] : s.points) {
      if (log_y && !(y > 0.0)) continue;
      os << px(x) << ',' << py(y) << ' ';
    }
    os << "'/>\n";
    os << "<text x='" << ml + pw + 10 << "' y='" << mt + 16 * (color + 1)
       << "' font-size='12' fill='" << c << "'>" << s.label << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
}

}  // namespace ppgd::cli
