#pragma once

#include <string>
#include <vector>

namespace hut {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // MSE spans decades across the epsilon grid
};

// Labeled line plot, one polyline per series. Throws DataError when the file
// cannot be written or no series has points.
void write_line_plot(const std::string& path, const std::vector<Series>& series,
                     const PlotOptions& options);

}  // namespace hut
