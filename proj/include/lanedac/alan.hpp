#pragma once

// Lane-anchored multi-hypothesis predictor.
//
// The convolutional/recurrent backbone of the original architecture is
// replaced by a flat-input MLP trunk. The final affine layer is split into
// three heads that share the trunk:
//   nt head    M x steps x (n, l)  trajectories along the input anchor
//   xy head    M x steps x (x, y)  auxiliary Cartesian trajectories
//   score head M logits            ranking of the hypotheses
//
// Inputs per agent: for each observed step (x, y, n, l, mask) in the agent
// frame, followed by the resampled anchor centerline in the same frame.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lanedac/geometry.hpp"
#include "lanedac/mlp.hpp"
#include "lanedac/objectives.hpp"

namespace lanedac {

struct AlanLayout {
  std::size_t hypotheses = 6;
  std::size_t steps = 12;

  std::size_t trajectory_size() const { return hypotheses * steps * 2; }
  std::size_t nt_offset() const { return 0; }
  std::size_t xy_offset() const { return trajectory_size(); }
  std::size_t score_offset() const { return 2 * trajectory_size(); }
  std::size_t output_size() const { return 2 * trajectory_size() + hypotheses; }
};

// Which trajectory heads are supervised.
enum class HeadSet { kXyOnly, kNtOnly, kNtXy };

struct AlanLossConfig {
  HeadSet heads = HeadSet::kNtXy;
  bool regularize = true;  // cross-head consistency terms (kNtXy only)
  double lambda1 = 1.0;    // nt predictions vs xy predictions mapped to nt
  double lambda2 = 1.0;    // xy predictions vs nt predictions mapped to xy
  ObjectiveConfig objective;
};

struct AlanLossComponents {
  double total = 0.0;
  double nt_dac = 0.0;
  double xy_dac = 0.0;
  double nt_reg = 0.0;  // unweighted; total uses lambda1 * nt_reg
  double xy_reg = 0.0;  // unweighted; total uses lambda2 * xy_reg
  double score = 0.0;
};

struct AlanLossResult {
  AlanLossComponents components;
  std::vector<double> grad;  // d(total)/d(outputs), same layout as outputs
  Weights nt_weights;
  Weights xy_weights;
};

// `outputs` holds absolute predictions in the AlanLayout order: nt values in
// meters along `anchor`, xy values in the scene frame, score logits.
// gt_nt / gt_xy are steps x 2. Each head picks its own winners with the
// configured objective; the score target q is built from the primary head's
// per-hypothesis L2 (nt, or xy for kXyOnly) and held constant, so `grad`
// is the gradient of the loss with q fixed at its current value.
// Regularizers average over hypotheses, pairing head m with head m.
AlanLossResult alan_loss(std::span<const double> outputs, const AlanLayout& layout,
                         std::span<const double> gt_nt, std::span<const double> gt_xy,
                         const Polyline& anchor, const AlanLossConfig& config,
                         std::size_t iter);

// Agent-centric frame used to normalize inputs and decode outputs.
struct AgentFrame {
  Point2 origin;          // last observed position
  double heading = 0.0;   // radians
  double l_origin = 0.0;  // arc length of the origin's projection on the anchor
  double scale = 10.0;    // meters per network unit
};

struct EncodingConfig {
  std::size_t anchor_points = 30;
  double anchor_behind = 10.0;  // crop of the anchor behind the agent, meters
  double anchor_ahead = 70.0;   // crop ahead of the agent, meters
  double scale = 10.0;
};

std::size_t encoded_input_size(std::size_t observed_steps, const EncodingConfig& config);

struct EncodedSample {
  std::vector<double> input;
  AgentFrame frame;
  std::vector<double> gt_nt;  // empty when no future was given
  std::vector<double> gt_xy;
};

// Builds the network input for one agent and anchor. `future` may be empty.
EncodedSample encode_sample(std::span<const Point2> past, std::span<const Point2> future,
                            const Polyline& anchor, const EncodingConfig& config);

// Raw network output -> absolute outputs (nt along the anchor, xy in the
// scene frame). Scores pass through unchanged.
std::vector<double> decode_outputs(std::span<const double> raw, const AlanLayout& layout,
                                   const AgentFrame& frame);

// Chain rule through decode_outputs: gradient w.r.t. absolute outputs ->
// gradient w.r.t. raw outputs.
std::vector<double> raw_gradient(std::span<const double> abs_grad, const AlanLayout& layout,
                                 const AgentFrame& frame);

class AlanModel {
 public:
  AlanModel() = default;
  AlanModel(std::size_t input_size, std::vector<std::size_t> hidden, AlanLayout layout,
            SeededRng& rng);
  AlanModel(Mlp net, AlanLayout layout);

  const AlanLayout& layout() const { return layout_; }
  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
  AlanLayout layout_;
};

// Final Cartesian trajectories (M x steps x 2) the configuration reports:
// the nt head mapped through the anchor, or the xy head for kXyOnly.
std::vector<double> predicted_trajectories(std::span<const double> outputs,
                                           const AlanLayout& layout, const Polyline& anchor,
                                           HeadSet heads);

}  // namespace lanedac
