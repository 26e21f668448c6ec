#pragma once

// Fully connected network with rectifier hidden layers and a linear output
// layer. Parameters live in one flat buffer laid out per layer as
// [W (rows = out, cols = in, row-major), b], so optimizers and checkpoints
// treat the model as a single vector.

#include <cstddef>
#include <span>
#include <vector>

#include "lanedac/rng.hpp"

namespace lanedac {

class Mlp {
 public:
  Mlp() = default;
  // All parameters zero. layer_sizes = {input, hidden..., output}, at least 2.
  explicit Mlp(std::vector<std::size_t> layer_sizes);

  // He-normal weights, zero biases.
  static Mlp random(std::vector<std::size_t> layer_sizes, SeededRng& rng);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t layer_count() const { return sizes_.size() - 1; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> biases(std::size_t layer);
  std::span<const double> biases(std::size_t layer) const;

  // Per-layer values kept for the backward pass: inputs[0] is the network
  // input, inputs[k] the post-activation output of layer k-1, and
  // pre[k] the affine output of layer k.
  struct Cache {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre;
    std::span<const double> output() const { return pre.back(); }
  };

  // Throws lanedac::Error on input size mismatch.
  Cache forward(std::span<const double> input) const;

  // Accumulates d(loss)/d(params) into param_grad (size parameter_count())
  // given d(loss)/d(output). If input_grad is non-empty it receives
  // d(loss)/d(input).
  void backward(const Cache& cache, std::span<const double> output_grad,
                std::span<double> param_grad, std::span<double> input_grad = {}) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;  // start of layer k's weights
  std::vector<double> params_;
};

}  // namespace lanedac
