#include "rsd/svg.hpp"

#include <array>
#include <cstdio>

#include "rsd/format.hpp"

namespace rsd {

namespace {

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 48.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

const std::string& palette(std::size_t i) {
  static const std::array<std::string, 8> colors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return colors[i % colors.size()];
}

SvgPlot::SvgPlot(double width, double height, std::string title)
    : width_(width), height_(height), title_(std::move(title)) {}

void SvgPlot::set_x_range(double lo, double hi) {
  x_lo_ = lo;
  x_hi_ = hi > lo ? hi : lo + 1.0;
}

void SvgPlot::set_y_range(double lo, double hi) {
  y_lo_ = lo;
  y_hi_ = hi > lo ? hi : lo + 1.0;
}

void SvgPlot::set_labels(std::string x_label, std::string y_label) {
  x_label_ = std::move(x_label);
  y_label_ = std::move(y_label);
}

double SvgPlot::px(double x) const {
  return kMarginLeft + (x - x_lo_) / (x_hi_ - x_lo_) * (width_ - kMarginLeft - kMarginRight);
}

double SvgPlot::py(double y) const {
  return height_ - kMarginBottom -
         (y - y_lo_) / (y_hi_ - y_lo_) * (height_ - kMarginTop - kMarginBottom);
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                       const std::string& legend) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) s += num(px(x)) + "," + num(py(y)) + " ";
  s += "\"/>";
  body_.push_back(std::move(s));
  if (!legend.empty()) legend_.emplace_back(legend, color);
}

void SvgPlot::markers(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      const std::string& legend) {
  for (const auto& [x, y] : pts) {
    body_.push_back("<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) +
                    "\" r=\"3.5\" fill=\"" + color + "\"/>");
  }
  if (!legend.empty()) legend_.emplace_back(legend, color);
}

void SvgPlot::bars(const std::vector<double>& edges, const std::vector<double>& heights,
                   const std::string& color) {
  for (std::size_t i = 0; i + 1 < edges.size() && i < heights.size(); ++i) {
    const double x0 = px(edges[i]);
    const double x1 = px(edges[i + 1]);
    const double y0 = py(heights[i]);
    const double y1 = py(y_lo_);
    body_.push_back("<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) +
                    "\" height=\"" + num(y1 - y0) + "\" fill=\"" + color +
                    "\" stroke=\"white\" stroke-width=\"0.5\"/>");
  }
}

void SvgPlot::cell(double x0, double y0, double x1, double y1, const std::string& color) {
  const double left = px(x0), right = px(x1);
  const double top = py(y1), bottom = py(y0);
  body_.push_back("<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" +
                  num(right - left) + "\" height=\"" + num(bottom - top) + "\" fill=\"" + color +
                  "\"/>");
}

std::string SvgPlot::render() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(width_ / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" +
         escape(title_) + "</text>\n";
  for (const std::string& line : body_) out += line + "\n";

  const double left = px(x_lo_), right = px(x_hi_), top = py(y_hi_), bottom = py(y_lo_);
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
         "\" height=\"" + num(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_lo_ + (x_hi_ - x_lo_) * k / 4.0;
    const double yv = y_lo_ + (y_hi_ - y_lo_) * k / 4.0;
    out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(bottom + 14) +
           "\" text-anchor=\"middle\">" + fmt_num(xv) + "</text>\n";
    out += "<text x=\"" + num(left - 4) + "\" y=\"" + num(py(yv) + 4) +
           "\" text-anchor=\"end\">" + fmt_num(yv) + "</text>\n";
  }
  out += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(height_ - 10) +
         "\" text-anchor=\"middle\">" + escape(x_label_) + "</text>\n";
  out += "<text x=\"14\" y=\"" + num((top + bottom) / 2) + "\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 14 " + num((top + bottom) / 2) + ")\">" + escape(y_label_) +
         "</text>\n";
  double ly = top + 8;
  for (const auto& [name, color] : legend_) {
    out += "<rect x=\"" + num(right + 10) + "\" y=\"" + num(ly - 8) +
           "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(right + 24) + "\" y=\"" + num(ly + 1) + "\">" + escape(name) +
           "</text>\n";
    ly += 16;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace rsd
