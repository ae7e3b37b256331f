#pragma once

#include <string>
#include <utility>
#include <vector>

namespace geomred::svg {

// SVG 1.1 canvas mapping the data box [x0, x1] × [y0, y1] onto width × height pixels.
class Canvas {
 public:
  Canvas(double width, double height, double x0, double x1, double y0, double y1);

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double stroke_width = 1.0);
  void circle(double x, double y, double r_px, const std::string& fill);
  void text(double x, double y, const std::string& s, double size_px = 12.0);
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double w_, h_, x0_, x1_, y0_, y1_;
  std::string body_;
};

}  // namespace geomred::svg
