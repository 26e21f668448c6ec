#pragma once

// Evaluation metrics for multi-hypothesis predictions.
//
// Trajectories are packed steps x 2 (x, y); sets of K trajectories are packed
// K x steps x 2. Reported distances are unsquared Euclidean meters.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lanedac/geometry.hpp"

namespace lanedac {

// min_m |hyp_m - gt| over endpoints packed M x dim.
double oracle_fde(std::span<const double> endpoints, std::span<const double> gt);

double ade(std::span<const double> traj, std::span<const double> gt);
double fde(std::span<const double> traj, std::span<const double> gt);
double max_displacement(std::span<const double> traj, std::span<const double> gt);

// Indices of the m_sel highest scores, best first; equal scores keep the
// lower index first.
std::vector<std::size_t> top_by_score(std::span<const double> scores, std::size_t m_sel);

struct DisplacementErrors {
  double made = 0.0;
  double mfde = 0.0;
};

// minADE / minFDE over the top m_sel trajectories by score.
DisplacementErrors made_mfde(std::span<const double> trajs, std::span<const double> scores,
                             std::span<const double> gt, std::size_t m_sel);

// True iff no trajectory among `selected` stays within d of the ground truth
// at every timestep (max displacement < d counts as a hit).
bool is_miss(std::span<const double> trajs, std::span<const std::size_t> selected,
             std::span<const double> gt, double d);

// Any point farther than halfwidth from every lane centerline (<= is inside).
bool is_offroad(std::span<const double> traj, std::span<const Polyline> lanes,
                double halfwidth);

// Fraction of evaluation samples whose nearest hypothesis is m.
std::vector<double> voronoi_occupancy(std::span<const double> hypotheses,
                                      std::span<const double> samples, std::size_t dim);

// Hypotheses whose Voronoi cell captures less than tau of the samples.
std::size_t spurious_mode_count(std::span<const double> hypotheses,
                                std::span<const double> samples, std::size_t dim, double tau);

struct AnchoredPast {
  const Polyline* anchor = nullptr;
  std::span<const Point2> past;
};

double mean_abs_normal(const Polyline& anchor, std::span<const Point2> past);

// Indices of samples whose mean |n| against their anchor is <= threshold.
std::vector<std::size_t> filter_bad_anchors(std::span<const AnchoredPast> samples,
                                            double threshold);

// Aggregated results of one (experiment, variant, strategy, seed) run.
// Metrics that do not apply are NaN and serialize as null / empty.
struct MetricReport {
  static constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

  std::string experiment;
  std::string variant;
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double oracle_fde = kNone;
  double emd = kNone;
  double made = kNone;
  double mfde = kNone;
  double miss_rate = kNone;
  double miss_threshold = kNone;
  std::size_t m_sel = 0;
  double offroad_rate = kNone;
  double spurious_count = kNone;
};

}  // namespace lanedac
