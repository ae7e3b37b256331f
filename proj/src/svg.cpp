#include "geomred/svg.hpp"

#include <cstdio>

namespace geomred::svg {

namespace {

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

Canvas::Canvas(double width, double height, double x0, double x1, double y0, double y1)
    : w_(width), h_(height), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {}

double Canvas::px(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
double Canvas::py(double y) const { return h_ - (y - y0_) / (y1_ - y0_) * h_; }

void Canvas::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                      double stroke_width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + f2(stroke_width) +
           "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) body_ += ' ';
    body_ += f2(px(pts[i].first)) + "," + f2(py(pts[i].second));
  }
  body_ += "\"/>\n";
}

void Canvas::circle(double x, double y, double r_px, const std::string& fill) {
  body_ += "<circle cx=\"" + f2(px(x)) + "\" cy=\"" + f2(py(y)) + "\" r=\"" + f2(r_px) +
           "\" fill=\"" + fill + "\"/>\n";
}

void Canvas::text(double x, double y, const std::string& s, double size_px) {
  body_ += "<text x=\"" + f2(px(x)) + "\" y=\"" + f2(py(y)) + "\" font-family=\"sans-serif\" font-size=\"" +
           f2(size_px) + "\">" + escape(s) + "</text>\n";
}

std::string Canvas::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         f2(w_) + "\" height=\"" + f2(h_) + "\" viewBox=\"0 0 " + f2(w_) + " " + f2(h_) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

}  // namespace geomred::svg
