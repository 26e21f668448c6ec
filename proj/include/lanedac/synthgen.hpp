#pragma once

// Seeded synthetic data. Every generator is a pure function of its config
// and the state of the SeededRng it is handed.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lanedac/geometry.hpp"
#include "lanedac/lanegraph.hpp"
#include "lanedac/rng.hpp"

namespace lanedac {

// ---------------------------------------------------------------------------
// Multimodal point clouds

struct ModeSpec {
  std::vector<double> mean;
  double sigma = 1.0;
  double probability = 1.0;
};

// Throws lanedac::Error unless the set is non-empty, dimensions agree,
// sigma > 0 and probabilities are non-negative and sum to 1 (within 1e-9).
void validate_modes(std::span<const ModeSpec> modes);

// Draws a mode index according to the mode probabilities.
std::size_t sample_mode(std::span<const ModeSpec> modes, SeededRng& rng);

// n draws packed n x dim: mode by probability, then isotropic Gaussian.
std::vector<double> sample_multimodal(std::span<const ModeSpec> modes, std::size_t n,
                                      SeededRng& rng);

// Four equiprobable, well separated 2-D modes at (+-spacing, +-spacing).
std::vector<ModeSpec> four_mode_fixture(double spacing = 4.0, double sigma = 0.5);

// ---------------------------------------------------------------------------
// Car-pedestrian interaction (CPI-like)

struct JointMode {
  Point2 car_goal;
  Point2 ped_goal;
  double probability = 0.0;
};

struct CpiConfig {
  std::size_t observed_steps = 4;
  double dt = 0.5;
  double goal_horizon = 3.0;  // seconds after the last observation
  bool crossing = true;       // false: single joint mode (car passes, ped waits)
  // Joint probabilities of (pass, wait), (yield, cross), (pass, cross),
  // (yield, wait).
  double p_pass_wait = 0.35;
  double p_yield_cross = 0.35;
  double p_pass_cross = 0.15;
  double p_yield_wait = 0.15;
  double goal_sigma = 0.3;
  double car_x_min = -24.0;
  double car_x_max = -16.0;
  double car_speed_min = 6.0;
  double car_speed_max = 10.0;
  double ped_y_min = -7.0;
  double ped_y_max = -4.0;
  double stop_line_x = -4.0;
  double ped_far_side_y = 5.0;
};

struct CpiScene {
  std::vector<Point2> car_past;
  std::vector<Point2> ped_past;
  std::vector<JointMode> modes;
  double goal_sigma = 0.3;
};

CpiScene gen_cpi(SeededRng& rng, const CpiConfig& config);

// Network input: both agents' observed positions, divided by `scale`.
std::vector<double> cpi_input(const CpiScene& scene, double scale = 10.0);

// One joint future drawn from the scene's modes: (car x, car y, ped x, ped y).
std::vector<double> sample_cpi_target(const CpiScene& scene, SeededRng& rng);

// The scene's modes as 4-D ModeSpecs.
std::vector<ModeSpec> cpi_mode_specs(const CpiScene& scene);

// ---------------------------------------------------------------------------
// Lane scenarios

struct LaneScenarioConfig {
  std::size_t branches = 3;      // 1..3: straight, left, right
  bool merge = false;            // add a lane merging into the approach
  double min_radius = 20.0;      // turn radius range of curved branches, meters
  double max_radius = 35.0;
  double min_turn = 0.6;         // turn angle range, radians
  double max_turn = 1.4;
  std::vector<double> branch_probabilities;  // empty: uniform
  std::size_t agents = 4;
  std::size_t observed_steps = 4;
  std::size_t future_steps = 12;
  double dt = 0.5;
  double min_speed = 6.0;
  double max_speed = 10.0;
  // Constant acceleration applied after the last observation, one value
  // drawn per agent (braking agents stop rather than reverse).
  std::vector<double> accelerations{-1.0, 0.0, 1.0};  // m/s^2
  std::vector<double> acceleration_probabilities;     // empty: uniform
  double noise_sigma = 0.2;       // lateral noise, meters
  double corridor_halfwidth = 2.0;
  double point_spacing = 2.0;     // centerline sampling, meters
};

struct LaneAgent {
  std::vector<Point2> past;
  std::vector<Point2> future;
  std::string branch_id;                // first segment after the fork
  std::vector<std::string> chain;       // generating segment chain
  std::vector<NTCoord> future_nt;       // future against the chain polyline
  double speed = 0.0;
  double acceleration = 0.0;
};

struct LaneScenario {
  LaneGraph graph;
  std::vector<LaneAgent> agents;
};

LaneScenario gen_lane_scenario(SeededRng& rng, const LaneScenarioConfig& config);

// Distance from the agent's final point to the nearest centerline of any
// other branch chain of the scenario (how far the branches have diverged).
double branch_divergence(const LaneScenario& scenario, const LaneAgent& agent);

// All lane centerlines of the graph (used as the drivable corridor).
std::vector<Polyline> lane_centerlines(const LaneGraph& graph);

}  // namespace lanedac
