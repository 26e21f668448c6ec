#pragma once

// Experiment configuration. Loaded from a JSON file whose sections mirror the
// structs below; unknown keys are rejected so typos fail loudly. Every field
// has a default, so an empty object is a valid config.

#include <cstdint>
#include <string>
#include <vector>

#include "lanedac/alan.hpp"
#include "lanedac/json_io.hpp"
#include "lanedac/objectives.hpp"
#include "lanedac/synthgen.hpp"

namespace lanedac {

// Unconditional fit on a fixed multimodal distribution.
struct ToyConfig {
  std::vector<Objective> variants{Objective::kWta, Objective::kRwta, Objective::kEwta,
                                  Objective::kDac};
  std::size_t hypotheses = 8;
  std::size_t steps = 10000;
  double lr = 0.02;
  double mode_spacing = 4.0;
  double mode_sigma = 0.5;
  double init_spread = 0.1;       // sigma of the initial hypothesis cluster
  std::size_t eval_samples = 2000;
  std::size_t emd_samples = 400;  // ground-truth samples in the EMD
  double tau = 0.0;               // spurious threshold; 0 means 0.1 / M
};

// Two-stage conditional model on CPI-like scenes.
struct CpiExperimentConfig {
  std::vector<Objective> variants{Objective::kWta, Objective::kRwta, Objective::kEwta,
                                  Objective::kDac};
  std::size_t hypotheses = 8;
  std::vector<std::size_t> hidden{64, 64};
  std::size_t train_scenes = 2000;
  std::size_t iterations = 12000;
  std::size_t batch_size = 8;
  double lr = 1e-3;
  std::size_t stage2_iterations = 4000;
  double stage2_lr = 1e-3;
  std::size_t test_scenes = 50;
  std::size_t gt_samples = 64;        // true-distribution draws per test scene
  std::size_t heldout_scenes = 50;    // for the mixture sigma fit
  CpiConfig scene;
};

struct LanesExperimentConfig {
  // Any of "xy", "nt", "ntxy", "ntxy_reg".
  std::vector<std::string> cells{"xy", "nt", "ntxy", "ntxy_reg"};
  std::size_t hypotheses = 6;
  std::vector<std::size_t> hidden{128, 128};
  std::size_t train_scenarios = 400;
  std::size_t test_scenarios = 40;
  std::size_t iterations = 12000;
  std::size_t batch_size = 8;
  double lr = 1e-3;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  std::size_t m_sel = 5;
  std::size_t top_anchors = 3;
  double miss_threshold = 2.0;
  double corridor_halfwidth = 2.0;
  double filter_bad_anchors = 0.0;  // 0 disables the filter
  LaneScenarioConfig scenario;
  RetrievalConfig retrieval;
  EncodingConfig encoding;
};

struct ExperimentConfig {
  Objective objective = Objective::kDac;  // used when a single variant is requested
  double eps = 0.05;
  std::size_t split_interval = 2000;
  std::vector<std::uint64_t> seeds{1};
  std::string out = "out";
  ToyConfig toy;
  CpiExperimentConfig cpi;
  LanesExperimentConfig lanes;
};

// Throws lanedac::Error with the offending key path.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

// Canonical serialization hash (FNV-1a 64 over the compact JSON dump).
std::string config_hash(const ExperimentConfig& c);

ObjectiveConfig objective_config(const ExperimentConfig& c, Objective o);

}  // namespace lanedac
