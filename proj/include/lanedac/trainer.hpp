#pragma once

// Training loops: direct hypothesis fitting (no network) and mini-batch
// training of an MLP under an arbitrary per-sample loss.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lanedac/adam.hpp"
#include "lanedac/mlp.hpp"
#include "lanedac/objectives.hpp"
#include "lanedac/rng.hpp"

namespace lanedac {

// M free points in a `dim`-dimensional output space, packed row-major.
struct HypothesisParams {
  std::size_t dim = 2;
  std::vector<double> values;

  std::size_t count() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> hypothesis(std::size_t m) const {
    return std::span<const double>(values).subspan(m * dim, dim);
  }
};

// Writes one ground-truth draw into `out` (size dim).
using Sampler = std::function<void(SeededRng&, std::span<double>)>;

struct FitConfig {
  ObjectiveConfig objective;
  AdamConfig adam{.lr = 0.02};
  std::size_t steps = 10000;
  std::size_t tally_window = 1000;  // recent_wins covers the final window
  std::uint64_t seed = 1;
};

struct FitResult {
  HypothesisParams params;
  std::vector<std::size_t> wins;         // over the whole run
  std::vector<std::size_t> recent_wins;  // over the final tally_window steps
};

// Per step: draw one sample, compute squared distances to every hypothesis,
// weight them with the configured variant, and take one Adam step on the
// weighted loss. Deterministic given config.seed.
FitResult fit_unconditional(HypothesisParams init, const Sampler& sampler,
                            const FitConfig& config);

struct TrainConfig {
  std::size_t iterations = 1000;
  std::size_t batch_size = 8;
  AdamConfig adam;
  std::uint64_t seed = 1;
};

// Per-sample loss: fills d(loss)/d(output) (pre-zeroed) and returns the loss
// components, the first being the total.
using SampleLoss = std::function<std::vector<double>(
    std::size_t sample, std::size_t iter, std::span<const double> output,
    std::span<double> output_grad)>;

struct TrainResult {
  // curves[i] = batch-mean loss components at iteration i.
  std::vector<std::vector<double>> curves;
  std::size_t epochs = 0;
};

// Shuffled mini-batches (seeded Fisher-Yates per epoch), batch loss = mean
// of per-sample totals, one Adam step per batch, lr decay after each epoch.
// Throws lanedac::Error on a non-finite loss.
TrainResult train_mlp(Mlp& net, std::span<const std::vector<double>> inputs,
                      const SampleLoss& loss, const TrainConfig& config);

}  // namespace lanedac
