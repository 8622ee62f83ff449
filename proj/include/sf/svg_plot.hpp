#pragma once

#include <string>
#include <vector>

namespace sf {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "p";
  std::string y_label = "MSE";
  int width = 640;
  int height = 420;
};

/// Static log-log line chart. Points with a nonpositive coordinate are dropped.
std::string render_loglog_svg(const std::vector<PlotSeries>& series, const PlotOptions& options = {});

}  // namespace sf
