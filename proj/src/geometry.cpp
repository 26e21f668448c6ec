#include "lanedac/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "lanedac/error.hpp"

namespace lanedac {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error("polyline needs at least two points");
  cumulative_.reserve(points_.size());
  directions_.reserve(points_.size() - 1);
  cumulative_.push_back(0.0);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!is_finite(points_[k])) {
      throw Error("polyline point " + std::to_string(k) + " is not finite");
    }
    if (k == 0) continue;
    const Point2 d = points_[k] - points_[k - 1];
    const double len = norm(d);
    if (len <= kMinSegment) {
      throw Error("polyline points " + std::to_string(k - 1) + " and " +
                  std::to_string(k) + " coincide");
    }
    cumulative_.push_back(cumulative_.back() + len);
    directions_.push_back((1.0 / len) * d);
  }
}

std::size_t Polyline::segment_at(double l) const {
  const std::size_t last = segment_count() - 1;
  if (!(l > 0.0)) return 0;
  if (l >= length()) return last;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), l);
  const auto k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return std::min(k, last);
}

Polyline resample(const Polyline& polyline, std::size_t p) {
  if (p < 2) throw Error("resample needs p >= 2");
  const double total = polyline.length();
  if (total < 1e-9) throw Error("cannot resample a degenerate polyline");
  const auto pts = polyline.points();
  const auto cum = polyline.cumulative();
  const double snap = 1e-12 * total;

  std::vector<Point2> out;
  out.reserve(p);
  out.push_back(pts.front());
  for (std::size_t j = 1; j + 1 < p; ++j) {
    const double s = total * static_cast<double>(j) / static_cast<double>(p - 1);
    const std::size_t k = polyline.segment_at(s);
    if (std::abs(s - cum[k]) <= snap) {
      out.push_back(pts[k]);
    } else if (std::abs(cum[k + 1] - s) <= snap) {
      out.push_back(pts[k + 1]);
    } else {
      out.push_back(pts[k] + (s - cum[k]) * polyline.direction(k));
    }
  }
  out.push_back(pts.back());
  return Polyline(std::move(out));
}

Projection project(const Polyline& polyline, Point2 q) {
  const auto pts = polyline.points();
  const auto cum = polyline.cumulative();
  const std::size_t segs = polyline.segment_count();

  std::size_t best = 0;
  double best_t = 0.0;
  double best_raw_t = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < segs; ++k) {
    const double len = polyline.segment_length(k);
    const double raw = dot(q - pts[k], polyline.direction(k)) / len;
    const double t = std::clamp(raw, 0.0, 1.0);
    const Point2 c = pts[k] + (t * len) * polyline.direction(k);
    const Point2 v = q - c;
    const double d2 = dot(v, v);
    // Strict comparison keeps the earlier segment, i.e. the smaller l.
    if (d2 < best_d2) {
      best_d2 = d2;
      best = k;
      best_t = t;
      best_raw_t = raw;
    }
  }

  const Point2 dir = polyline.direction(best);
  const Point2 nl = left_normal(dir);
  const double len = polyline.segment_length(best);
  Projection out;
  out.segment = best;

  if (best == 0 && best_raw_t <= 0.0) {
    out.region = ProjectionRegion::kBeforeStart;
    out.closest = pts.front();
    out.nt = {cross(dir, q - pts.front()), 0.0};
    out.dn_dq = nl;
    out.dl_dq = {0.0, 0.0};
  } else if (best == segs - 1 && best_raw_t >= 1.0) {
    out.region = ProjectionRegion::kPastEnd;
    out.closest = pts.back();
    out.nt = {cross(dir, q - pts.back()), polyline.length()};
    out.dn_dq = nl;
    out.dl_dq = {0.0, 0.0};
  } else if (best_t > 0.0 && best_t < 1.0) {
    out.region = ProjectionRegion::kInterior;
    out.closest = pts[best] + (best_t * len) * dir;
    out.nt = {cross(dir, q - pts[best]), cum[best] + best_t * len};
    out.dn_dq = nl;
    out.dl_dq = dir;
  } else {
    // Closest point is an interior vertex; the sign comes from the tangent
    // bisector there.
    const std::size_t v = best_t <= 0.0 ? best : best + 1;
    const Point2 tangent = polyline.direction(v - 1) + polyline.direction(v);
    const Point2 bisector = norm(tangent) > 1e-12 ? tangent : polyline.direction(v - 1);
    const Point2 off = q - pts[v];
    const double dist = norm(off);
    const double sign = cross(bisector, off) < 0.0 ? -1.0 : 1.0;
    out.region = ProjectionRegion::kVertex;
    out.closest = pts[v];
    out.nt = {sign * dist, cum[v]};
    out.dn_dq = dist > 0.0 ? (sign / dist) * off : Point2{0.0, 0.0};
    out.dl_dq = {0.0, 0.0};
  }
  return out;
}

Placement place(const Polyline& polyline, NTCoord c) {
  const std::size_t k = polyline.segment_at(c.l);
  const Point2 dir = polyline.direction(k);
  const Point2 nl = left_normal(dir);
  const Point2 base = polyline.points()[k];
  const double along = c.l - polyline.cumulative()[k];
  return {base + along * dir + c.n * nl, nl, dir};
}

double yaw_at(const Polyline& polyline, double l) {
  const Point2 d = polyline.direction(polyline.segment_at(l));
  return std::atan2(d.y, d.x);
}

Polyline sub_polyline(const Polyline& polyline, double l_begin, double l_end) {
  const double total = polyline.length();
  l_begin = std::clamp(l_begin, 0.0, total);
  l_end = std::clamp(l_end, 0.0, total);
  if (l_end - l_begin <= Polyline::kMinSegment) throw Error("sub_polyline range is empty");
  const auto pts = polyline.points();
  const auto cum = polyline.cumulative();
  std::vector<Point2> out;
  out.push_back(nt_to_xy(polyline, {0.0, l_begin}));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (cum[k] - l_begin > Polyline::kMinSegment && l_end - cum[k] > Polyline::kMinSegment) {
      out.push_back(pts[k]);
    }
  }
  out.push_back(nt_to_xy(polyline, {0.0, l_end}));
  return Polyline(std::move(out));
}

double distance_to(const Polyline& polyline, Point2 q) {
  return distance(q, project(polyline, q).closest);
}

}  // namespace lanedac
