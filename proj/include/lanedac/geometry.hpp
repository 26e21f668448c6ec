#pragma once

// Polylines with arc-length parametrization and the curvilinear
// normal-tangential (nt) frame along them.
//
// Conventions:
//   n > 0 means left of the local direction of travel.
//   l is the arc length of the closest polyline point, clamped to [0, length].
//   Points projecting beyond either end take n from the extended terminal
//   segment, so slightly overrunning trajectories still convert.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lanedac {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }
// Unit vector rotated +90 degrees from `dir`.
inline Point2 left_normal(Point2 dir) { return {-dir.y, dir.x}; }

struct NTCoord {
  double n = 0.0;  // signed lateral offset
  double l = 0.0;  // arc length along the polyline
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct Pose {
  Point2 position;
  double yaw = 0.0;

  Pose() = default;
  Pose(Point2 p, double yaw_rad) : position(p), yaw(wrap_angle(yaw_rad)) {}
};

class Polyline {
 public:
  // Throws lanedac::Error on fewer than two points, non-finite coordinates,
  // or consecutive points closer than kMinSegment.
  explicit Polyline(std::vector<Point2> points);

  static constexpr double kMinSegment = 1e-9;

  std::span<const Point2> points() const { return points_; }
  std::span<const double> cumulative() const { return cumulative_; }
  std::size_t size() const { return points_.size(); }
  std::size_t segment_count() const { return points_.size() - 1; }
  double length() const { return cumulative_.back(); }

  Point2 front() const { return points_.front(); }
  Point2 back() const { return points_.back(); }

  // Unit direction of segment k.
  Point2 direction(std::size_t k) const { return directions_[k]; }
  double segment_length(std::size_t k) const {
    return cumulative_[k + 1] - cumulative_[k];
  }

  // Segment containing arc length l; at interior vertices the following
  // segment. Values outside [0, length] map to the terminal segments.
  std::size_t segment_at(double l) const;

 private:
  std::vector<Point2> points_;
  std::vector<double> cumulative_;
  std::vector<Point2> directions_;
};

// p equally spaced points by arc length, endpoints preserved. Each returned
// point lies exactly on the input polyline at arc length j*length/(p-1);
// sample positions that coincide with input vertices return those vertices.
Polyline resample(const Polyline& polyline, std::size_t p);

enum class ProjectionRegion { kInterior, kVertex, kBeforeStart, kPastEnd };

struct Projection {
  NTCoord nt;
  Point2 closest;          // closest polyline point
  std::size_t segment = 0; // segment the closest point was found on
  ProjectionRegion region = ProjectionRegion::kInterior;
  // Partial derivatives of n and l with respect to the query point. Exact
  // inside each region; the map is only piecewise smooth across regions.
  Point2 dn_dq;
  Point2 dl_dq;
};

Projection project(const Polyline& polyline, Point2 q);

inline NTCoord project_xy_to_nt(const Polyline& polyline, Point2 q) {
  return project(polyline, q).nt;
}

struct Placement {
  Point2 point;
  Point2 d_dn;  // derivative of the point with respect to n
  Point2 d_dl;  // derivative of the point with respect to l
};

Placement place(const Polyline& polyline, NTCoord c);

inline Point2 nt_to_xy(const Polyline& polyline, NTCoord c) {
  return place(polyline, c).point;
}

double yaw_at(const Polyline& polyline, double l);

// The part of the polyline between arc lengths l_begin and l_end (clamped to
// the polyline's extent). Throws lanedac::Error if the clamped range is
// shorter than Polyline::kMinSegment.
Polyline sub_polyline(const Polyline& polyline, double l_begin, double l_end);

// Unsigned Euclidean distance from q to the polyline.
double distance_to(const Polyline& polyline, Point2 q);

}  // namespace lanedac
