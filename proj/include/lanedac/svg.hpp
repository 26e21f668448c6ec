#pragma once

// Minimal SVG writer for experiment plots: data-space bounds are mapped onto
// a fixed canvas with y pointing up. Output depends only on the inputs.

#include <span>
#include <string>
#include <vector>

#include "lanedac/geometry.hpp"

namespace lanedac {

class SvgPlot {
 public:
  SvgPlot(double width = 600.0, double height = 600.0, double margin = 40.0);

  // Grows the data bounds to include p (call for everything before drawing).
  void include(Point2 p);
  void include(std::span<const Point2> pts);

  void polyline(std::span<const Point2> pts, const std::string& stroke, double width = 1.5,
                double opacity = 1.0);
  void circle(Point2 c, double radius_px, const std::string& fill, double opacity = 1.0);
  void text(Point2 at_px, const std::string& s, double size = 14.0);
  // Frame with min/max tick labels on both axes.
  void axes();

  std::string str() const;

 private:
  Point2 map(Point2 p) const;

  double width_, height_, margin_;
  Point2 lo_{1e300, 1e300};
  Point2 hi_{-1e300, -1e300};
  std::vector<std::string> items_;
};

}  // namespace lanedac
