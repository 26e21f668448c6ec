#pragma once

// Exact earth mover's distance between weighted point sets, solved as a
// transportation problem with the transportation simplex (MODI potentials,
// stepping-stone cycles on the basis spanning tree).

#include <cstddef>
#include <span>
#include <vector>

namespace lanedac {

struct WeightedPoints {
  std::size_t dim = 2;
  std::vector<double> coords;   // count x dim, row-major
  std::vector<double> weights;  // count, non-negative

  std::size_t count() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * dim, dim);
  }
};

// Points with equal weights 1/count.
WeightedPoints uniform_points(std::size_t dim, std::vector<double> coords);

struct TransportPlan {
  double cost = 0.0;
  std::vector<double> flow;  // supply.size() x demand.size(), row-major
  std::size_t pivots = 0;
};

// Minimizes sum c_ij x_ij subject to row sums = supply, column sums = demand,
// x >= 0. Throws lanedac::Error on negative masses or when the totals differ
// by more than 1e-9.
TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

// Euclidean ground-distance matrix between the two sets.
std::vector<double> euclidean_costs(const WeightedPoints& a, const WeightedPoints& b);

// Optimal transport cost with Euclidean ground metric.
double emd(const WeightedPoints& predicted, const WeightedPoints& reference);

}  // namespace lanedac
