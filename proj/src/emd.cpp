#include "lanedac/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lanedac/error.hpp"
#include "lanedac/simd/kernels.hpp"

namespace lanedac {

WeightedPoints uniform_points(std::size_t dim, std::vector<double> coords) {
  if (dim == 0 || coords.empty() || coords.size() % dim != 0) {
    throw Error("uniform_points: coordinates must be a non-empty multiple of dim");
  }
  const std::size_t n = coords.size() / dim;
  return WeightedPoints{dim, std::move(coords),
                        std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

namespace {

// Basis of the transportation simplex: n + m - 1 cells forming a spanning
// tree over the bipartite graph of rows (nodes 0..n-1) and columns
// (nodes n..n+m-1).
class Basis {
 public:
  Basis(std::size_t n, std::size_t m) : n_(n), m_(m) {}

  void add(std::size_t i, std::size_t j, double x) { cells_.push_back({i, j, x}); }

  struct Cell {
    std::size_t i, j;
    double x;
  };
  std::vector<Cell>& cells() { return cells_; }

  // Potentials u (rows) and v (columns) with u_0 = 0 and u_i + v_j = c_ij on
  // every basic cell.
  void potentials(std::span<const double> cost, std::vector<double>& u,
                  std::vector<double>& v) const {
    const std::size_t nodes = n_ + m_;
    build_adjacency();
    std::vector<double> pot(nodes, 0.0);
    std::vector<bool> seen(nodes, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t e : adj_[a]) {
        const Cell& c = cells_[e];
        const std::size_t row = c.i, col = n_ + c.j;
        const std::size_t b = a == row ? col : row;
        if (seen[b]) continue;
        seen[b] = true;
        const double cij = cost[c.i * m_ + c.j];
        pot[b] = cij - pot[a];
        stack.push_back(b);
      }
    }
    u.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(n_));
    v.assign(pot.begin() + static_cast<std::ptrdiff_t>(n_), pot.end());
  }

  // Basic cell indices along the tree path from row node i to column node j,
  // in order starting at the cell touching row i.
  std::vector<std::size_t> path(std::size_t i, std::size_t j) const {
    const std::size_t nodes = n_ + m_;
    std::vector<std::size_t> parent_edge(nodes, kNone);
    std::vector<bool> seen(nodes, false);
    std::vector<std::size_t> queue{i};
    seen[i] = true;
    const std::size_t target = n_ + j;
    for (std::size_t h = 0; h < queue.size() && !seen[target]; ++h) {
      const std::size_t a = queue[h];
      for (std::size_t e : adj_[a]) {
        const Cell& c = cells_[e];
        const std::size_t b = a == c.i ? n_ + c.j : c.i;
        if (seen[b]) continue;
        seen[b] = true;
        parent_edge[b] = e;
        queue.push_back(b);
      }
    }
    std::vector<std::size_t> edges;
    for (std::size_t node = target; node != i;) {
      const std::size_t e = parent_edge[node];
      edges.push_back(e);
      const Cell& c = cells_[e];
      node = node == c.i ? n_ + c.j : c.i;
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

  void build_adjacency() const {
    adj_.assign(n_ + m_, {});
    for (std::size_t e = 0; e < cells_.size(); ++e) {
      adj_[cells_[e].i].push_back(e);
      adj_[n_ + cells_[e].j].push_back(e);
    }
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t n_, m_;
  std::vector<Cell> cells_;
  mutable std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  if (n == 0 || m == 0) throw Error("transport problem needs non-empty supply and demand");
  if (cost.size() != n * m) throw Error("cost matrix has the wrong size");
  double ts = 0.0, td = 0.0;
  for (double s : supply) {
    if (!(s >= 0.0)) throw Error("supply masses must be non-negative");
    ts += s;
  }
  for (double d : demand) {
    if (!(d >= 0.0)) throw Error("demand masses must be non-negative");
    td += d;
  }
  if (std::abs(ts - td) > 1e-9) throw Error("transport problem is infeasible: masses differ");

  // Northwest-corner start. Advancing only one index when both run out keeps
  // exactly n + m - 1 basic cells.
  Basis basis(n, m);
  {
    std::vector<double> r(supply.begin(), supply.end());
    std::vector<double> c(demand.begin(), demand.end());
    std::size_t i = 0, j = 0;
    while (true) {
      const double x = std::min(r[i], c[j]);
      basis.add(i, j, x);
      r[i] -= x;
      c[j] -= x;
      if (i == n - 1 && j == m - 1) break;
      if (j == m - 1 || (i < n - 1 && r[i] <= c[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  double cmax = 0.0;
  for (double c : cost) cmax = std::max(cmax, std::abs(c));
  const double tol = 1e-12 * std::max(1.0, cmax);

  TransportPlan plan;
  std::vector<double> u, v;
  std::vector<bool> is_basic(n * m, false);
  std::size_t degenerate_streak = 0;
  const std::size_t max_pivots = 50 * (n + m) * (n + m) + 1000;
  while (plan.pivots < max_pivots) {
    std::fill(is_basic.begin(), is_basic.end(), false);
    for (const auto& c : basis.cells()) is_basic[c.i * m + c.j] = true;
    basis.potentials(cost, u, v);

    // Dantzig pricing, switching to Bland's first-improving rule during long
    // runs of degenerate pivots.
    const bool bland = degenerate_streak > n + m;
    std::size_t ei = 0, ej = 0;
    double best = -tol;
    bool found = false;
    for (std::size_t i = 0; i < n && !(bland && found); ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (is_basic[i * m + j]) continue;
        const double rc = cost[i * m + j] - u[i] - v[j];
        if (rc < best) {
          best = rc;
          ei = i;
          ej = j;
          found = true;
          if (bland) break;
        }
      }
    }
    if (!found) break;

    // Cycle: entering (+), then alternating -,+,... along the tree path.
    const std::vector<std::size_t> path = basis.path(ei, ej);
    auto& cells = basis.cells();
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = path.front();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (cells[path[k]].x < theta) {
        theta = cells[path[k]].x;
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      cells[path[k]].x += (k % 2 == 0) ? -theta : theta;
    }
    cells[leaving] = {ei, ej, theta};
    degenerate_streak = theta > 0.0 ? 0 : degenerate_streak + 1;
    ++plan.pivots;
  }
  if (plan.pivots >= max_pivots) throw Error("transport simplex did not converge");

  plan.flow.assign(n * m, 0.0);
  for (const auto& c : basis.cells()) {
    const double x = std::max(0.0, c.x);
    plan.flow[c.i * m + c.j] = x;
    plan.cost += x * cost[c.i * m + c.j];
  }
  return plan;
}

std::vector<double> euclidean_costs(const WeightedPoints& a, const WeightedPoints& b) {
  if (a.dim != b.dim) throw Error("point sets have different dimensions");
  std::vector<double> costs(a.count() * b.count());
  for (std::size_t i = 0; i < a.count(); ++i) {
    std::span<double> row{costs.data() + i * b.count(), b.count()};
    simd::squared_distances(b.coords, a.point(i), row);
    for (double& c : row) c = std::sqrt(c);
  }
  return costs;
}

double emd(const WeightedPoints& predicted, const WeightedPoints& reference) {
  if (predicted.count() == 0 || reference.count() == 0) {
    throw Error("emd needs non-empty point sets");
  }
  return solve_transport(predicted.weights, reference.weights,
                         euclidean_costs(predicted, reference))
      .cost;
}

}  // namespace lanedac
