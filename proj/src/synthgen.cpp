#include "lanedac/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lanedac/error.hpp"

namespace lanedac {

void validate_modes(std::span<const ModeSpec> modes) {
  if (modes.empty()) throw Error("mode set is empty");
  const std::size_t dim = modes.front().mean.size();
  if (dim == 0) throw Error("mode mean is empty");
  double total = 0.0;
  for (const auto& m : modes) {
    if (m.mean.size() != dim) throw Error("modes have different dimensions");
    if (!(m.sigma > 0.0)) throw Error("mode sigma must be positive");
    if (!(m.probability >= 0.0)) throw Error("mode probability must be non-negative");
    total += m.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("mode probabilities must sum to 1");
}

std::size_t sample_mode(std::span<const ModeSpec> modes, SeededRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    acc += modes[i].probability;
    if (u < acc) return i;
  }
  // Rounding left u above the accumulated total: last mode with mass.
  for (std::size_t i = modes.size(); i-- > 0;) {
    if (modes[i].probability > 0.0) return i;
  }
  return modes.size() - 1;
}

std::vector<double> sample_multimodal(std::span<const ModeSpec> modes, std::size_t n,
                                      SeededRng& rng) {
  validate_modes(modes);
  const std::size_t dim = modes.front().mean.size();
  std::vector<double> out;
  out.reserve(n * dim);
  for (std::size_t s = 0; s < n; ++s) {
    const ModeSpec& m = modes[sample_mode(modes, rng)];
    for (std::size_t j = 0; j < dim; ++j) out.push_back(rng.normal(m.mean[j], m.sigma));
  }
  return out;
}

std::vector<ModeSpec> four_mode_fixture(double spacing, double sigma) {
  std::vector<ModeSpec> modes;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      modes.push_back(ModeSpec{{sx * spacing, sy * spacing}, sigma, 0.25});
    }
  }
  return modes;
}

// ---------------------------------------------------------------------------

CpiScene gen_cpi(SeededRng& rng, const CpiConfig& config) {
  if (config.observed_steps < 1) throw Error("cpi: need at least one observed step");
  CpiScene scene;
  scene.goal_sigma = config.goal_sigma;
  const double x_last = rng.uniform(config.car_x_min, config.car_x_max);
  const double speed = rng.uniform(config.car_speed_min, config.car_speed_max);
  const double ped_y = rng.uniform(config.ped_y_min, config.ped_y_max);
  const std::size_t t_obs = config.observed_steps;
  for (std::size_t k = 0; k < t_obs; ++k) {
    const double back = static_cast<double>(t_obs - 1 - k) * config.dt;
    scene.car_past.push_back({x_last - speed * back, 0.0});
    scene.ped_past.push_back({0.0, ped_y});
  }
  const Point2 car_pass{x_last + speed * config.goal_horizon, 0.0};
  const Point2 car_yield{config.stop_line_x, 0.0};
  const Point2 ped_cross{0.0, config.ped_far_side_y};
  const Point2 ped_wait{0.0, ped_y};
  if (!config.crossing) {
    scene.modes.push_back({car_pass, ped_wait, 1.0});
    return scene;
  }
  const double total =
      config.p_pass_wait + config.p_yield_cross + config.p_pass_cross + config.p_yield_wait;
  if (std::abs(total - 1.0) > 1e-9) throw Error("cpi joint mode probabilities must sum to 1");
  scene.modes.push_back({car_pass, ped_wait, config.p_pass_wait});
  scene.modes.push_back({car_yield, ped_cross, config.p_yield_cross});
  scene.modes.push_back({car_pass, ped_cross, config.p_pass_cross});
  scene.modes.push_back({car_yield, ped_wait, config.p_yield_wait});
  return scene;
}

std::vector<double> cpi_input(const CpiScene& scene, double scale) {
  std::vector<double> in;
  in.reserve(4 * scene.car_past.size());
  for (const Point2& p : scene.car_past) {
    in.push_back(p.x / scale);
    in.push_back(p.y / scale);
  }
  for (const Point2& p : scene.ped_past) {
    in.push_back(p.x / scale);
    in.push_back(p.y / scale);
  }
  return in;
}

std::vector<ModeSpec> cpi_mode_specs(const CpiScene& scene) {
  std::vector<ModeSpec> specs;
  for (const auto& m : scene.modes) {
    specs.push_back(ModeSpec{{m.car_goal.x, m.car_goal.y, m.ped_goal.x, m.ped_goal.y},
                             scene.goal_sigma, m.probability});
  }
  return specs;
}

std::vector<double> sample_cpi_target(const CpiScene& scene, SeededRng& rng) {
  const auto specs = cpi_mode_specs(scene);
  return sample_multimodal(specs, 1, rng);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Point2> straight(Point2 from, Point2 to, double spacing) {
  const double len = distance(from, to);
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing)));
  std::vector<Point2> pts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    pts.push_back(from + t * (to - from));
  }
  return pts;
}

// Arc starting at `from` with heading `heading`, signed turn angle `turn`
// (positive = left) and radius `radius`. Returns points and the exit pose.
std::vector<Point2> arc(Point2 from, double heading, double turn, double radius,
                        double spacing, Point2& end, double& end_heading) {
  const double len = radius * std::abs(turn);
  const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(len / spacing)));
  const double side = turn >= 0.0 ? 1.0 : -1.0;
  const Point2 normal{-std::sin(heading), std::cos(heading)};
  const Point2 center = from + (side * radius) * normal;
  std::vector<Point2> pts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double h = heading + turn * static_cast<double>(i) / static_cast<double>(n);
    const Point2 rel{std::sin(h), -std::cos(h)};  // from center, for a left turn
    pts.push_back(center + (side * radius) * rel);
  }
  pts.front() = from;
  end = pts.back();
  end_heading = heading + turn;
  return pts;
}

struct Transform {
  double angle;
  Point2 offset;
  Point2 operator()(Point2 p) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y + offset.x, s * p.x + c * p.y + offset.y};
  }
};

}  // namespace

LaneScenario gen_lane_scenario(SeededRng& rng, const LaneScenarioConfig& config) {
  if (config.branches < 1 || config.branches > 3) throw Error("branches must be 1, 2 or 3");
  if (config.observed_steps < 2 || config.future_steps < 1) {
    throw Error("lane scenario needs >= 2 observed and >= 1 future steps");
  }
  std::vector<double> probs = config.branch_probabilities;
  if (probs.empty()) probs.assign(config.branches, 1.0 / static_cast<double>(config.branches));
  if (probs.size() != config.branches) throw Error("one probability per branch is required");
  if (config.accelerations.empty()) throw Error("at least one acceleration mode is required");
  std::vector<double> accel_probs = config.acceleration_probabilities;
  if (accel_probs.empty()) {
    accel_probs.assign(config.accelerations.size(),
                       1.0 / static_cast<double>(config.accelerations.size()));
  }
  if (accel_probs.size() != config.accelerations.size()) {
    throw Error("one probability per acceleration mode is required");
  }
  std::vector<ModeSpec> accel_pick;
  for (double p : accel_probs) accel_pick.push_back(ModeSpec{{0.0}, 1.0, p});
  validate_modes(accel_pick);

  const Transform tf{rng.uniform(-std::numbers::pi, std::numbers::pi),
                     {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)}};
  const double sp = config.point_spacing;

  struct Raw {
    std::string id;
    std::vector<Point2> pts;
    std::vector<std::string> succ, pred;
  };
  std::vector<Raw> raw;
  raw.push_back({"p", straight({-60.0, 0.0}, {-30.0, 0.0}, sp), {"a"}, {}});
  raw.push_back({"a", straight({-30.0, 0.0}, {0.0, 0.0}, sp), {}, {"p"}});
  if (config.merge) {
    raw.push_back({"m", straight({-56.0, -15.0}, {-30.0, 0.0}, sp), {"a"}, {}});
    raw[1].pred.push_back("m");
  }
  const double turn_sign[3] = {0.0, 1.0, -1.0};
  for (std::size_t b = 0; b < config.branches; ++b) {
    const std::string f = "f" + std::to_string(b);
    const std::string g = "g" + std::to_string(b);
    Point2 end;
    double heading = 0.0;
    std::vector<Point2> fpts;
    if (turn_sign[b] == 0.0) {
      fpts = straight({0.0, 0.0}, {30.0, 0.0}, sp);
      end = {30.0, 0.0};
    } else {
      const double radius = rng.uniform(config.min_radius, config.max_radius);
      const double turn = turn_sign[b] * rng.uniform(config.min_turn, config.max_turn);
      fpts = arc({0.0, 0.0}, 0.0, turn, radius, sp, end, heading);
    }
    const Point2 exit = end + 80.0 * Point2{std::cos(heading), std::sin(heading)};
    raw[1].succ.push_back(f);
    raw.push_back({f, std::move(fpts), {g}, {"a"}});
    raw.push_back({g, straight(end, exit, sp), {}, {f}});
  }

  std::vector<LaneSegment> segs;
  for (auto& r : raw) {
    std::vector<Point2> pts;
    for (const Point2& p : r.pts) pts.push_back(tf(p));
    segs.push_back(LaneSegment{r.id, Polyline(std::move(pts)), r.succ, r.pred});
  }
  LaneScenario scenario{LaneGraph(std::move(segs)), {}};

  const double fork_s = 60.0;
  const double limit = 0.8 * config.corridor_halfwidth;
  const double t_obs = static_cast<double>(config.observed_steps);
  for (std::size_t k = 0; k < config.agents; ++k) {
    std::vector<ModeSpec> pick;
    for (double p : probs) pick.push_back(ModeSpec{{0.0}, 1.0, p});
    validate_modes(pick);
    const std::size_t b = sample_mode(pick, rng);
    LaneAgent agent;
    agent.branch_id = "f" + std::to_string(b);
    agent.chain = {"p", "a", agent.branch_id, "g" + std::to_string(b)};
    const Polyline chain = chain_polyline(scenario.graph, agent.chain);

    agent.speed = rng.uniform(config.min_speed, config.max_speed);
    const double step = agent.speed * config.dt;
    const double s_obs = fork_s - rng.uniform(2.0, 20.0);
    const double s0 = std::max(0.0, s_obs - (t_obs - 1.0) * step);
    auto noisy = [&](double s) {
      const double n = std::clamp(rng.normal(0.0, config.noise_sigma), -limit, limit);
      return std::pair{nt_to_xy(chain, {n, s}), NTCoord{n, s}};
    };
    for (std::size_t i = 0; i < config.observed_steps; ++i) {
      agent.past.push_back(noisy(s0 + static_cast<double>(i) * step).first);
    }
    const double s_last = s0 + (t_obs - 1.0) * step;
    agent.acceleration = config.accelerations[sample_mode(accel_pick, rng)];
    const double a = agent.acceleration;
    const double v = agent.speed;
    for (std::size_t j = 1; j <= config.future_steps; ++j) {
      double t = static_cast<double>(j) * config.dt;
      if (a < 0.0) t = std::min(t, -v / a);  // stopped
      auto [p, c] = noisy(s_last + v * t + 0.5 * a * t * t);
      agent.future.push_back(p);
      agent.future_nt.push_back(c);
    }
    for (const Point2& p : agent.future) {
      if (distance_to(chain, p) > config.corridor_halfwidth + 1e-9) {
        throw Error("generated agent left its corridor");
      }
    }
    scenario.agents.push_back(std::move(agent));
  }
  return scenario;
}

double branch_divergence(const LaneScenario& scenario, const LaneAgent& agent) {
  const Point2 end = agent.future.empty() ? agent.past.back() : agent.future.back();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [id, seg] : scenario.graph.segments()) {
    if (id.empty() || (id[0] != 'f' && id[0] != 'g')) continue;
    if (id.substr(1) == agent.branch_id.substr(1)) continue;
    best = std::min(best, distance_to(seg.centerline, end));
  }
  return best;
}

std::vector<Polyline> lane_centerlines(const LaneGraph& graph) {
  std::vector<Polyline> out;
  for (const auto& [id, seg] : graph.segments()) out.push_back(seg.centerline);
  return out;
}

}  // namespace lanedac
