#include <doctest.h>

#include <numbers>

#include "lanedac/error.hpp"
#include "lanedac/geometry.hpp"
#include "lanedac/rng.hpp"

using namespace lanedac;

namespace {

// (0,0) -> (10,0) -> (10,10): a left turn.
Polyline elbow() { return Polyline({{0, 0}, {10, 0}, {10, 10}}); }

}  // namespace

TEST_CASE("polyline construction") {
  const Polyline p = elbow();
  CHECK(p.length() == 20.0);
  CHECK(p.segment_count() == 2);
  CHECK(p.segment_at(-1.0) == 0);
  CHECK(p.segment_at(5.0) == 0);
  CHECK(p.segment_at(10.0) == 1);
  CHECK(p.segment_at(25.0) == 1);
  CHECK_THROWS_AS(Polyline({{0, 0}}), Error);
  CHECK_THROWS_AS(Polyline({{0, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(Polyline({{0, 0}, {std::nan(""), 1}}), Error);
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  constexpr double pi = std::numbers::pi;
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(-5 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(0.25) == 0.25);
}

TEST_CASE("projection regions and signs") {
  const Polyline p = elbow();
  auto pr = project(p, {4, 2});
  CHECK(pr.region == ProjectionRegion::kInterior);
  CHECK(pr.nt.n == doctest::Approx(2.0));
  CHECK(pr.nt.l == doctest::Approx(4.0));

  pr = project(p, {4, -3});
  CHECK(pr.nt.n == doctest::Approx(-3.0));

  pr = project(p, {-2, 1});
  CHECK(pr.region == ProjectionRegion::kBeforeStart);
  CHECK(pr.nt.n == doctest::Approx(1.0));
  CHECK(pr.nt.l == 0.0);

  pr = project(p, {9, 14});
  CHECK(pr.region == ProjectionRegion::kPastEnd);
  CHECK(pr.nt.n == doctest::Approx(1.0));
  CHECK(pr.nt.l == 20.0);

  // Outside corner of the turn: closest point is the vertex, to the right.
  pr = project(p, {13, -4});
  CHECK(pr.region == ProjectionRegion::kVertex);
  CHECK(pr.nt.n == doctest::Approx(-5.0));
  CHECK(pr.nt.l == 10.0);
}

TEST_CASE("place and project invert each other away from vertices") {
  const Polyline p = elbow();
  for (double l : {1.0, 4.5, 8.0, 12.0, 19.0}) {
    for (double n : {-0.8, 0.0, 0.6}) {
      const Point2 q = nt_to_xy(p, {n, l});
      const NTCoord c = project_xy_to_nt(p, q);
      CHECK(c.n == doctest::Approx(n).epsilon(1e-12));
      CHECK(c.l == doctest::Approx(l).epsilon(1e-12));
    }
  }
}

TEST_CASE("jacobians match finite differences inside a segment") {
  const Polyline p({{0, 0}, {8, 3}, {15, -2}});
  const double h = 1e-6;
  for (Point2 q : {Point2{3, 2}, Point2{11, 1}, Point2{5, -1}}) {
    const auto pr = project(p, q);
    REQUIRE(pr.region == ProjectionRegion::kInterior);
    const auto px = project(p, {q.x + h, q.y}), mx = project(p, {q.x - h, q.y});
    const auto py = project(p, {q.x, q.y + h}), my = project(p, {q.x, q.y - h});
    CHECK(pr.dn_dq.x == doctest::Approx((px.nt.n - mx.nt.n) / (2 * h)).epsilon(1e-6));
    CHECK(pr.dn_dq.y == doctest::Approx((py.nt.n - my.nt.n) / (2 * h)).epsilon(1e-6));
    CHECK(pr.dl_dq.x == doctest::Approx((px.nt.l - mx.nt.l) / (2 * h)).epsilon(1e-6));
    CHECK(pr.dl_dq.y == doctest::Approx((py.nt.l - my.nt.l) / (2 * h)).epsilon(1e-6));

    const NTCoord c = pr.nt;
    const auto pl = place(p, c);
    const Point2 a = nt_to_xy(p, {c.n + h, c.l}), b = nt_to_xy(p, {c.n - h, c.l});
    CHECK(pl.d_dn.x == doctest::Approx((a.x - b.x) / (2 * h)).epsilon(1e-6));
    CHECK(pl.d_dn.y == doctest::Approx((a.y - b.y) / (2 * h)).epsilon(1e-6));
    const Point2 e = nt_to_xy(p, {c.n, c.l + h}), f = nt_to_xy(p, {c.n, c.l - h});
    CHECK(pl.d_dl.x == doctest::Approx((e.x - f.x) / (2 * h)).epsilon(1e-6));
    CHECK(pl.d_dl.y == doctest::Approx((e.y - f.y) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("place extrapolates along the terminal segments") {
  const Polyline p = elbow();
  const Point2 before = nt_to_xy(p, {1.0, -2.0});
  CHECK(before.x == doctest::Approx(-2.0));
  CHECK(before.y == doctest::Approx(1.0));
  const Point2 after = nt_to_xy(p, {0.0, 23.0});
  CHECK(after.x == doctest::Approx(10.0));
  CHECK(after.y == doctest::Approx(13.0));
}

TEST_CASE("resample keeps endpoints and spacing") {
  const Polyline p = elbow();
  const Polyline r = resample(p, 5);
  REQUIRE(r.size() == 5);
  CHECK(r.points()[0] == Point2{0, 0});
  CHECK(r.points()[2] == Point2{10, 0});
  CHECK(r.points()[4] == Point2{10, 10});
  CHECK(r.points()[1].x == doctest::Approx(5.0));
  CHECK(r.points()[3].y == doctest::Approx(5.0));
  // Points lie on the input polyline.
  const Polyline r7 = resample(p, 7);
  for (Point2 q : r7.points()) CHECK(distance_to(p, q) < 1e-12);
  CHECK_THROWS_AS(resample(p, 1), Error);
}

TEST_CASE("sub_polyline crops by arc length") {
  const Polyline p = elbow();
  const Polyline s = sub_polyline(p, 5.0, 15.0);
  CHECK(s.length() == doctest::Approx(10.0));
  CHECK(s.front() == Point2{5, 0});
  CHECK(s.points()[1] == Point2{10, 0});
  CHECK(s.back() == Point2{10, 5});
  CHECK(sub_polyline(p, -5.0, 50.0).length() == doctest::Approx(20.0));
  CHECK_THROWS_AS(sub_polyline(p, 30.0, 40.0), Error);
}

TEST_CASE("yaw along the polyline") {
  const Polyline p = elbow();
  CHECK(yaw_at(p, 3.0) == doctest::Approx(0.0));
  CHECK(yaw_at(p, 13.0) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("on-curve points project to their own arc length in order") {
  SeededRng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> pts{{0, 0}};
    double heading = rng.uniform(-3.0, 3.0);
    for (int k = 0; k < 5; ++k) {
      heading += rng.uniform(-0.5, 0.5);
      const double len = rng.uniform(1.0, 6.0);
      pts.push_back(pts.back() + len * Point2{std::cos(heading), std::sin(heading)});
    }
    const Polyline p(pts);
    double prev = -1.0;
    for (int j = 0; j <= 40; ++j) {
      const double l = p.length() * j / 40.0;
      const NTCoord c = project_xy_to_nt(p, nt_to_xy(p, {0.0, l}));
      CHECK(c.l >= prev);
      CHECK(c.l == doctest::Approx(l).epsilon(1e-9));
      prev = c.l;
    }
  }
}
