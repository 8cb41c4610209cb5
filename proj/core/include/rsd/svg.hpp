#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rsd {

// Minimal deterministic SVG writer for static figures: a plot frame with
// linear axes mapping data coordinates into a fixed pixel box.
class SvgPlot {
 public:
  SvgPlot(double width, double height, std::string title);

  void set_x_range(double lo, double hi);
  void set_y_range(double lo, double hi);
  void set_labels(std::string x_label, std::string y_label);

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                const std::string& legend = "");
  void markers(const std::vector<std::pair<double, double>>& pts, const std::string& color,
               const std::string& legend = "");
  void bars(const std::vector<double>& edges, const std::vector<double>& heights,
            const std::string& color);
  // Raw data-space rectangle, used for rasters.
  void cell(double x0, double y0, double x1, double y1, const std::string& color);

  std::string render() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double width_, height_;
  std::string title_, x_label_, y_label_;
  double x_lo_ = 0.0, x_hi_ = 1.0, y_lo_ = 0.0, y_hi_ = 1.0;
  std::vector<std::string> body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

// Fixed categorical palette.
const std::string& palette(std::size_t i);

}  // namespace rsd
