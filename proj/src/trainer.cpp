#include "lanedac/trainer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "lanedac/error.hpp"
#include "lanedac/losses.hpp"

namespace lanedac {

FitResult fit_unconditional(HypothesisParams init, const Sampler& sampler,
                            const FitConfig& config) {
  const std::size_t dim = init.dim;
  const std::size_t m = init.count();
  if (m == 0 || init.values.size() != m * dim) throw Error("invalid hypothesis parameters");

  FitResult out;
  out.params = std::move(init);
  out.wins.assign(m, 0);
  out.recent_wins.assign(m, 0);

  SeededRng rng(config.seed);
  AdamState adam(out.params.values.size(), config.adam);
  std::vector<double> sample(dim);
  std::vector<double> grad(out.params.values.size());
  const std::size_t recent_from =
      config.steps > config.tally_window ? config.steps - config.tally_window : 0;

  for (std::size_t step = 0; step < config.steps; ++step) {
    sampler(rng, sample);
    const auto losses = per_hypothesis_l2(out.params.values, sample, dim);
    const Weights w = variant_weights(config.objective, losses, step);
    const std::size_t winner = argmin_index(losses);
    ++out.wins[winner];
    if (step >= recent_from) ++out.recent_wins[winner];

    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        grad[i * dim + j] = 2.0 * w[i] * (out.params.values[i * dim + j] - sample[j]);
      }
    }
    adam.step(out.params.values, grad);
  }
  return out;
}

TrainResult train_mlp(Mlp& net, std::span<const std::vector<double>> inputs,
                      const SampleLoss& loss, const TrainConfig& config) {
  if (inputs.empty()) throw Error("training set is empty");
  if (config.batch_size == 0) throw Error("batch size must be positive");

  TrainResult result;
  SeededRng rng(config.seed);
  AdamState adam(net.parameter_count(), config.adam);
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(net.parameter_count());
  std::vector<double> out_grad(net.output_size());

  std::size_t cursor = inputs.size();  // forces a shuffle on the first batch
  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<double> mean_components;
    std::size_t in_batch = 0;
    for (std::size_t b = 0; b < config.batch_size; ++b) {
      if (cursor >= order.size()) {
        if (iter > 0 || b > 0) {
          adam.end_epoch();
          ++result.epochs;
        }
        for (std::size_t i = order.size(); i > 1; --i) {
          std::swap(order[i - 1], order[rng.below(i)]);
        }
        cursor = 0;
      }
      const std::size_t idx = order[cursor++];
      const Mlp::Cache cache = net.forward(inputs[idx]);
      std::fill(out_grad.begin(), out_grad.end(), 0.0);
      const std::vector<double> comps = loss(idx, iter, cache.output(), out_grad);
      if (comps.empty() || !std::isfinite(comps.front())) {
        std::ostringstream msg;
        msg << "non-finite loss at iteration " << iter << " (sample " << idx << ")";
        throw Error(msg.str());
      }
      net.backward(cache, out_grad, grad);
      if (mean_components.empty()) mean_components.assign(comps.size(), 0.0);
      for (std::size_t c = 0; c < comps.size(); ++c) mean_components[c] += comps[c];
      ++in_batch;
    }
    const double inv = 1.0 / static_cast<double>(in_batch);
    for (double& g : grad) g *= inv;
    for (double& c : mean_components) c *= inv;
    adam.step(net.parameters(), grad);
    result.curves.push_back(std::move(mean_components));
  }
  // An epoch that ended on the last batch is complete too.
  if (config.iterations > 0 && cursor >= order.size()) ++result.epochs;
  return result;
}

}  // namespace lanedac
