#pragma once

// Minimal static line charts: two axes, tick labels at the data extremes and
// one polyline per series.

#include <iosfwd>
#include <string>
#include <vector>

namespace curvecode {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 400;
};

void write_line_plot(std::ostream& out, const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace curvecode
