#include "lanedac/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace lanedac {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgPlot::SvgPlot(double width, double height, double margin)
    : width_(width), height_(height), margin_(margin) {}

void SvgPlot::include(Point2 p) {
  if (!is_finite(p)) return;
  lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
  hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
}

void SvgPlot::include(std::span<const Point2> pts) {
  for (const Point2& p : pts) include(p);
}

Point2 SvgPlot::map(Point2 p) const {
  Point2 lo = lo_, hi = hi_;
  if (lo.x > hi.x) {
    lo = {-1.0, -1.0};
    hi = {1.0, 1.0};
  }
  // Equal scale on both axes so geometry is not distorted.
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-9});
  const double s = std::min(width_, height_) - 2.0 * margin_;
  const Point2 mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
  return {0.5 * width_ + (p.x - mid.x) / span * s, 0.5 * height_ - (p.y - mid.y) / span * s};
}

void SvgPlot::polyline(std::span<const Point2> pts, const std::string& stroke, double width,
                       double opacity) {
  std::string d;
  for (const Point2& p : pts) {
    const Point2 q = map(p);
    if (!d.empty()) d += ' ';
    d += num(q.x) + "," + num(q.y);
  }
  items_.push_back("<polyline points=\"" + d + "\" fill=\"none\" stroke=\"" + stroke +
                   "\" stroke-width=\"" + num(width) + "\" stroke-opacity=\"" + num(opacity) +
                   "\"/>");
}

void SvgPlot::circle(Point2 c, double radius_px, const std::string& fill, double opacity) {
  const Point2 q = map(c);
  items_.push_back("<circle cx=\"" + num(q.x) + "\" cy=\"" + num(q.y) + "\" r=\"" +
                   num(radius_px) + "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) +
                   "\"/>");
}

void SvgPlot::text(Point2 at_px, const std::string& s, double size) {
  items_.push_back("<text x=\"" + num(at_px.x) + "\" y=\"" + num(at_px.y) +
                   "\" font-family=\"sans-serif\" font-size=\"" + num(size) + "\">" +
                   escape(s) + "</text>");
}

void SvgPlot::axes() {
  const double m = margin_;
  items_.push_back("<rect x=\"" + num(m) + "\" y=\"" + num(m) + "\" width=\"" +
                   num(width_ - 2 * m) + "\" height=\"" + num(height_ - 2 * m) +
                   "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>");
  if (lo_.x <= hi_.x) {
    text({m, height_ - m + 16}, "x " + num(lo_.x) + " .. " + num(hi_.x), 11);
    text({4, m - 8}, "y " + num(lo_.y) + " .. " + num(hi_.y), 11);
  }
}

std::string SvgPlot::str() const {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) +
                    "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
                    num(height_) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& item : items_) out += item + "\n";
  out += "</svg>\n";
  return out;
}

}  // namespace lanedac
