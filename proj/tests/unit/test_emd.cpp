#include <doctest.h>

#include <algorithm>
#include <vector>

#include "lanedac/emd.hpp"
#include "lanedac/error.hpp"
#include "lanedac/rng.hpp"
#include "support/oracles.hpp"

using namespace lanedac;

namespace {

std::vector<double> random_masses(SeededRng& rng, std::size_t n, double total) {
  std::vector<double> w(n);
  double s = 0.0;
  for (double& v : w) {
    // Some exact zeros exercise degenerate bases.
    v = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.01, 1.0);
    s += v;
  }
  if (s == 0.0) {
    w[0] = 1.0;
    s = 1.0;
  }
  for (double& v : w) v *= total / s;
  return w;
}

}  // namespace

TEST_CASE("single points and one-dimensional sets") {
  const auto a = uniform_points(2, {0, 0});
  const auto b = uniform_points(2, {3, 4});
  CHECK(emd(a, b) == doctest::Approx(5.0));
  // In 1-D, equal-size uniform sets match in sorted order.
  const auto c = uniform_points(1, {0, 5, 1, 9});
  const auto d = uniform_points(1, {2, 2, 8, 3});
  CHECK(emd(c, d) == doctest::Approx((2.0 + 1.0 + 2.0 + 1.0) / 4.0));
  CHECK(emd(c, c) == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("flow is feasible and reproduces the cost") {
  SeededRng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(6), m = 1 + rng.below(10);
    const auto s = random_masses(rng, n, 1.0), d = random_masses(rng, m, 1.0);
    std::vector<double> c(n * m);
    for (double& v : c) v = rng.uniform(0, 10);
    const auto plan = solve_transport(s, d, c);
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double x = plan.flow[i * m + j];
        CHECK(x >= -1e-12);
        row += x;
        cost += x * c[i * m + j];
      }
      CHECK(row == doctest::Approx(s[i]).epsilon(1e-9).scale(1.0));
    }
    for (std::size_t j = 0; j < m; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += plan.flow[i * m + j];
      CHECK(col == doctest::Approx(d[j]).epsilon(1e-9).scale(1.0));
    }
    CHECK(cost == doctest::Approx(plan.cost).epsilon(1e-9));
    CHECK(plan.cost == doctest::Approx(oracle::transport_cost(s, d, c)).epsilon(1e-9));
  }
}

TEST_CASE("degenerate and tied instances") {
  // Identical costs everywhere: every feasible plan is optimal.
  const std::vector<double> s{0.5, 0.5}, d{0.25, 0.25, 0.5};
  const std::vector<double> c(6, 2.0);
  CHECK(solve_transport(s, d, c).cost == doctest::Approx(2.0));
  // Supply and demand matching exactly in pairs.
  const std::vector<double> s2{0.3, 0.7}, d2{0.7, 0.3};
  const std::vector<double> c2{5, 0, 0, 5};
  CHECK(solve_transport(s2, d2, c2).cost == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("input validation") {
  const std::vector<double> c{1, 1};
  CHECK_THROWS_AS(solve_transport(std::vector<double>{1.0}, std::vector<double>{0.5, 0.4}, c),
                  Error);
  CHECK_THROWS_AS(solve_transport(std::vector<double>{-1.0}, std::vector<double>{-0.5, -0.5}, c),
                  Error);
}
