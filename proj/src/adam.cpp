#include "lanedac/adam.hpp"

#include <cmath>
#include <string>

#include "lanedac/error.hpp"

namespace lanedac {

AdamState::AdamState(std::size_t parameter_count, AdamConfig config)
    : config_(config), lr_(config.lr), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {
  if (!(config.lr >= 0.0)) throw Error("learning rate must be non-negative");
}

void AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw Error("adam step: parameter/gradient size mismatch");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw Error("adam step: non-finite gradient at parameter " + std::to_string(i));
    }
  }
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] -= lr_ * mhat / (std::sqrt(vhat) + config_.epsilon);
  }
}

void AdamState::end_epoch() { lr_ *= config_.lr_gamma; }

}  // namespace lanedac
