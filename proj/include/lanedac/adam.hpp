#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lanedac {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lr_gamma = 0.95;  // multiplicative decay applied by end_epoch()
};

// Adam with bias correction over a flat parameter vector.
class AdamState {
 public:
  AdamState(std::size_t parameter_count, AdamConfig config);

  // Throws lanedac::Error if any gradient is non-finite; parameters are left
  // untouched in that case.
  void step(std::span<double> params, std::span<const double> grads);

  // lr <- lr * lr_gamma
  void end_epoch();

  double lr() const { return lr_; }
  std::size_t step_count() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  double lr_;
  std::size_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace lanedac
