#pragma once

#include <string>
#include <vector>

namespace pacmarl::svg {

struct Series {
  std::string name;
  std::string color;  // any SVG color, e.g. "#1f77b4"
  std::vector<double> x;
  std::vector<double> y;
  // Optional band drawn behind the line; same length as x when present.
  std::vector<double> band_low;
  std::vector<double> band_high;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
  std::vector<Series> series;
};

// Self-contained SVG document. Non-finite points (and non-positive ones on a
// log axis) are skipped.
std::string render(const LineChart& chart);

}  // namespace pacmarl::svg
