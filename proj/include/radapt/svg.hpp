#pragma once

#include <string>
#include <vector>

namespace radapt {

/// Minimal line plot rendered to SVG: axes with ticks, optional log scales,
/// one <polyline> per series and a legend.
class SvgPlot {
 public:
  struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool dashed = false;
    bool markers = false;
  };

  SvgPlot(std::string title, std::string xlabel, std::string ylabel);

  SvgPlot& log_x(bool on = true);
  SvgPlot& log_y(bool on = true);
  /// Throws InvalidParameter on length mismatch, and on nonpositive values
  /// along a logarithmic axis.
  SvgPlot& add(Series series);

  std::string render(int width = 640, int height = 480) const;

 private:
  std::string title_;
  std::string xlabel_;
  std::string ylabel_;
  bool log_x_ = false;
  bool log_y_ = false;
  std::vector<Series> series_;
};

}  // namespace radapt
