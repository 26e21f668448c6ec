#include "lanedac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lanedac/error.hpp"
#include "lanedac/simd/kernels.hpp"

namespace lanedac {

double oracle_fde(std::span<const double> endpoints, std::span<const double> gt) {
  const std::size_t dim = gt.size();
  if (dim == 0 || endpoints.empty() || endpoints.size() % dim != 0) {
    throw Error("oracle_fde: need at least one hypothesis of the ground-truth dimension");
  }
  std::vector<double> d2(endpoints.size() / dim);
  simd::squared_distances(endpoints, gt, d2);
  return std::sqrt(*std::min_element(d2.begin(), d2.end()));
}

namespace {

void check_traj(std::span<const double> traj, std::span<const double> gt) {
  if (gt.empty() || gt.size() % 2 != 0 || traj.size() != gt.size()) {
    throw Error("trajectory and ground truth must both be steps x 2");
  }
}

}  // namespace

double ade(std::span<const double> traj, std::span<const double> gt) {
  check_traj(traj, gt);
  double s = 0.0;
  for (std::size_t t = 0; t < gt.size(); t += 2) {
    s += std::hypot(traj[t] - gt[t], traj[t + 1] - gt[t + 1]);
  }
  return s / static_cast<double>(gt.size() / 2);
}

double fde(std::span<const double> traj, std::span<const double> gt) {
  check_traj(traj, gt);
  const std::size_t t = gt.size() - 2;
  return std::hypot(traj[t] - gt[t], traj[t + 1] - gt[t + 1]);
}

double max_displacement(std::span<const double> traj, std::span<const double> gt) {
  check_traj(traj, gt);
  double mx = 0.0;
  for (std::size_t t = 0; t < gt.size(); t += 2) {
    mx = std::max(mx, std::hypot(traj[t] - gt[t], traj[t + 1] - gt[t + 1]));
  }
  return mx;
}

std::vector<std::size_t> top_by_score(std::span<const double> scores, std::size_t m_sel) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  idx.resize(std::min(m_sel, idx.size()));
  return idx;
}

DisplacementErrors made_mfde(std::span<const double> trajs, std::span<const double> scores,
                             std::span<const double> gt, std::size_t m_sel) {
  const std::size_t d = gt.size();
  if (d == 0 || trajs.size() != scores.size() * d) {
    throw Error("made_mfde: trajectory set does not match scores and ground truth");
  }
  if (m_sel == 0 || m_sel > scores.size()) throw Error("made_mfde: m_sel must lie in [1, K]");
  DisplacementErrors out{std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity()};
  for (std::size_t k : top_by_score(scores, m_sel)) {
    const auto t = trajs.subspan(k * d, d);
    out.made = std::min(out.made, ade(t, gt));
    out.mfde = std::min(out.mfde, fde(t, gt));
  }
  return out;
}

bool is_miss(std::span<const double> trajs, std::span<const std::size_t> selected,
             std::span<const double> gt, double d) {
  if (!(d > 0.0)) throw Error("miss threshold must be positive");
  const std::size_t len = gt.size();
  for (std::size_t k : selected) {
    if (max_displacement(trajs.subspan(k * len, len), gt) < d) return false;
  }
  return true;
}

bool is_offroad(std::span<const double> traj, std::span<const Polyline> lanes,
                double halfwidth) {
  if (!(halfwidth > 0.0)) throw Error("corridor halfwidth must be positive");
  for (std::size_t t = 0; t + 1 < traj.size(); t += 2) {
    const Point2 p{traj[t], traj[t + 1]};
    const bool inside = std::any_of(lanes.begin(), lanes.end(), [&](const Polyline& lane) {
      return distance_to(lane, p) <= halfwidth;
    });
    if (!inside) return true;
  }
  return false;
}

std::vector<double> voronoi_occupancy(std::span<const double> hypotheses,
                                      std::span<const double> samples, std::size_t dim) {
  if (dim == 0 || hypotheses.empty() || hypotheses.size() % dim != 0 ||
      samples.size() % dim != 0) {
    throw Error("voronoi_occupancy: inconsistent dimensions");
  }
  const std::size_t m = hypotheses.size() / dim;
  const std::size_t n = samples.size() / dim;
  std::vector<double> counts(m, 0.0);
  std::vector<double> d2(m);
  for (std::size_t s = 0; s < n; ++s) {
    simd::squared_distances(hypotheses, samples.subspan(s * dim, dim), d2);
    const auto best = static_cast<std::size_t>(
        std::min_element(d2.begin(), d2.end()) - d2.begin());
    counts[best] += 1.0;
  }
  if (n > 0) {
    for (double& c : counts) c /= static_cast<double>(n);
  }
  return counts;
}

std::size_t spurious_mode_count(std::span<const double> hypotheses,
                                std::span<const double> samples, std::size_t dim, double tau) {
  const auto occ = voronoi_occupancy(hypotheses, samples, dim);
  return static_cast<std::size_t>(
      std::count_if(occ.begin(), occ.end(), [&](double f) { return f < tau; }));
}

double mean_abs_normal(const Polyline& anchor, std::span<const Point2> past) {
  if (past.empty()) throw Error("mean_abs_normal needs a non-empty trajectory");
  double s = 0.0;
  for (const Point2& p : past) s += std::abs(project_xy_to_nt(anchor, p).n);
  return s / static_cast<double>(past.size());
}

std::vector<std::size_t> filter_bad_anchors(std::span<const AnchoredPast> samples,
                                            double threshold) {
  if (!(threshold > 0.0)) throw Error("bad-anchor threshold must be positive");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (mean_abs_normal(*samples[i].anchor, samples[i].past) <= threshold) kept.push_back(i);
  }
  return kept;
}

}  // namespace lanedac
