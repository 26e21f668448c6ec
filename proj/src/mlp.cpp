#include "lanedac/mlp.hpp"

#include <cmath>
#include <string>

#include "lanedac/error.hpp"
#include "lanedac/simd/kernels.hpp"

namespace lanedac {

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw Error("an MLP needs at least input and output sizes");
  std::size_t total = 0;
  for (std::size_t k = 0; k + 1 < sizes_.size(); ++k) {
    if (sizes_[k] == 0 || sizes_[k + 1] == 0) throw Error("MLP layer sizes must be positive");
    offsets_.push_back(total);
    total += sizes_[k + 1] * sizes_[k] + sizes_[k + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::random(std::vector<std::size_t> layer_sizes, SeededRng& rng) {
  Mlp net(std::move(layer_sizes));
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    const double stddev = std::sqrt(2.0 / static_cast<double>(net.sizes_[k]));
    for (double& w : net.weights(k)) w = stddev * rng.normal();
  }
  return net;
}

std::span<double> Mlp::weights(std::size_t layer) {
  return {params_.data() + offsets_[layer], sizes_[layer + 1] * sizes_[layer]};
}

std::span<const double> Mlp::weights(std::size_t layer) const {
  return {params_.data() + offsets_[layer], sizes_[layer + 1] * sizes_[layer]};
}

std::span<double> Mlp::biases(std::size_t layer) {
  return {params_.data() + offsets_[layer] + sizes_[layer + 1] * sizes_[layer],
          sizes_[layer + 1]};
}

std::span<const double> Mlp::biases(std::size_t layer) const {
  return {params_.data() + offsets_[layer] + sizes_[layer + 1] * sizes_[layer],
          sizes_[layer + 1]};
}

Mlp::Cache Mlp::forward(std::span<const double> input) const {
  if (input.size() != input_size()) {
    throw Error("MLP input has " + std::to_string(input.size()) + " values, expected " +
                std::to_string(input_size()));
  }
  Cache cache;
  cache.inputs.reserve(layer_count());
  cache.pre.reserve(layer_count());
  cache.inputs.emplace_back(input.begin(), input.end());
  for (std::size_t k = 0; k < layer_count(); ++k) {
    std::vector<double> z(sizes_[k + 1]);
    simd::gemv(weights(k), cache.inputs.back(), biases(k), z);
    if (k + 1 < layer_count()) {
      std::vector<double> a(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
      cache.inputs.push_back(std::move(a));
    }
    cache.pre.push_back(std::move(z));
  }
  return cache;
}

void Mlp::backward(const Cache& cache, std::span<const double> output_grad,
                   std::span<double> param_grad, std::span<double> input_grad) const {
  if (output_grad.size() != output_size()) throw Error("MLP output gradient size mismatch");
  if (param_grad.size() != parameter_count()) throw Error("MLP parameter gradient size mismatch");
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  for (std::size_t k = layer_count(); k-- > 0;) {
    const std::size_t in = sizes_[k];
    const std::size_t out = sizes_[k + 1];
    std::span<double> gw{param_grad.data() + offsets_[k], out * in};
    std::span<double> gb{param_grad.data() + offsets_[k] + out * in, out};
    simd::outer_accumulate(gw, delta, cache.inputs[k]);
    for (std::size_t i = 0; i < out; ++i) gb[i] += delta[i];
    if (k == 0 && input_grad.empty()) break;
    std::vector<double> upstream(in, 0.0);
    simd::gemv_transposed_accumulate(weights(k), delta, upstream);
    if (k == 0) {
      for (std::size_t i = 0; i < in; ++i) input_grad[i] += upstream[i];
      break;
    }
    const auto& pre_prev = cache.pre[k - 1];
    for (std::size_t i = 0; i < in; ++i) {
      if (!(pre_prev[i] > 0.0)) upstream[i] = 0.0;
    }
    delta = std::move(upstream);
  }
}

}  // namespace lanedac
