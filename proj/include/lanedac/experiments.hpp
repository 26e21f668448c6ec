#pragma once

// Experiment drivers behind the command line tool. Each driver is a pure
// function of (config, seed): data, initialization and shuffling streams are
// derived from the seed, so repeated runs produce identical reports.

#include <cstdint>
#include <string>
#include <vector>

#include "lanedac/alan.hpp"
#include "lanedac/config.hpp"
#include "lanedac/lanegraph.hpp"
#include "lanedac/metrics.hpp"
#include "lanedac/mlp.hpp"
#include "lanedac/synthgen.hpp"
#include "lanedac/trainer.hpp"

namespace lanedac {

// ---------------------------------------------------------------------------
// Toy: unconditional hypotheses on a fixed multimodal distribution.

struct ToyVariantRun {
  Objective objective = Objective::kDac;
  FitResult fit;
  MetricReport report;
};

struct ToyRun {
  std::vector<ModeSpec> modes;
  HypothesisParams initial;
  std::vector<double> eval_samples;  // n x 2
  std::vector<ToyVariantRun> variants;
};

ToyRun run_toy(const ExperimentConfig& config, std::uint64_t seed);

// Hypotheses (sized by win share) over the evaluation samples.
std::string toy_svg(const ToyRun& run, const ToyVariantRun& variant);

// ---------------------------------------------------------------------------
// CPI-like two-stage model.

struct CpiVariantRun {
  Objective objective = Objective::kDac;
  Mlp stage1;  // scaled inputs -> M x 4 goals (scaled)
  Mlp stage2;  // scaled inputs -> M logits
  double sigma = 1.0;
  double heldout_log_likelihood = 0.0;
  MetricReport report;
};

std::vector<CpiVariantRun> run_cpi(const ExperimentConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Lane-anchored prediction.

struct LaneCell {
  std::string name;
  HeadSet heads = HeadSet::kNtXy;
  bool regularize = false;
};

// "xy", "nt", "ntxy" or "ntxy_reg".
LaneCell lane_cell(const std::string& name);

struct LaneDataset {
  std::vector<LaneScenario> scenarios;
};

LaneDataset make_lane_dataset(const LaneScenarioConfig& config, std::size_t count,
                              std::uint64_t seed);
Json lane_dataset_to_json(const LaneDataset& data);
LaneDataset lane_dataset_from_json(const Json& j);

// Last observed pose (heading of the final motion) and speed of an agent.
Pose agent_pose(std::span<const Point2> past);
double agent_speed(std::span<const Point2> past, double dt);

// Ranked anchors from the observed past only.
std::vector<AnchorCandidate> inference_anchors(const LaneScenario& scenario,
                                               const LaneAgent& agent,
                                               const LanesExperimentConfig& config);
// Best anchor given the whole trajectory; the look-ahead horizon spans the
// prediction horizon.
AnchorCandidate oracle_anchor(const LaneScenario& scenario, const LaneAgent& agent,
                              const LanesExperimentConfig& config);

struct LaneCheckpoint {
  std::string cell;
  std::uint64_t seed = 0;
  ExperimentConfig config;  // settings used for training and evaluation
  AlanModel model;
};

Json checkpoint_to_json(const LaneCheckpoint& ckpt);
LaneCheckpoint checkpoint_from_json(const Json& j);

struct LaneTrainResult {
  LaneCheckpoint checkpoint;
  TrainResult curves;
};

LaneTrainResult train_lane_cell(const ExperimentConfig& config, const LaneDataset& train,
                                const std::string& cell, std::uint64_t seed);

// Raw outputs decoded to absolute units for one agent and anchor.
std::vector<double> predict_lane(const LaneCheckpoint& ckpt, const LaneAgent& agent,
                                 const Polyline& anchor);

// One row per strategy: "top_m", "oracle", "best_of_all". Samples whose
// top-ranked anchor fits the past worse than `filter_bad_anchors` meters
// (when > 0) are dropped first.
std::vector<MetricReport> evaluate_lanes(const LaneCheckpoint& ckpt, const LaneDataset& test,
                                         double filter_bad_anchors);

struct LanesRun {
  LaneDataset train;
  LaneDataset test;
  std::vector<LaneTrainResult> cells;
  std::vector<MetricReport> rows;
};

LanesRun run_lanes(const ExperimentConfig& config, std::uint64_t seed);

// Scenario drawing: lanes, observed past, ground truth and (optionally)
// the predictions of a checkpoint on its best anchors.
std::string lane_svg(const LaneScenario& scenario, const LaneCheckpoint* ckpt);

}  // namespace lanedac
