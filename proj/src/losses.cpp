#include "lanedac/losses.hpp"

#include <algorithm>
#include <cmath>

#include "lanedac/error.hpp"
#include "lanedac/simd/kernels.hpp"

namespace lanedac {

std::vector<double> per_hypothesis_l2(std::span<const double> preds,
                                      std::span<const double> target,
                                      std::size_t point_dim) {
  const std::size_t d = target.size();
  if (d == 0 || point_dim == 0 || d % point_dim != 0) {
    throw Error("target size must be a positive multiple of the point dimension");
  }
  if (preds.size() % d != 0) throw Error("prediction size is not a multiple of target size");
  const std::size_t m = preds.size() / d;
  const double steps = static_cast<double>(d / point_dim);
  std::vector<double> out(m);
  simd::squared_distances(preds, target, out);
  for (double& v : out) v /= steps;
  return out;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error("softmax of an empty vector");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (double z : logits) s += std::exp(z - mx);
  const double lse = mx + std::log(s);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  auto out = log_softmax(logits);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::vector<double> ioc_target_q(std::span<const double> distances) {
  std::vector<double> neg(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) neg[i] = -distances[i];
  return softmax(neg);
}

double score_loss(std::span<const double> logits, std::span<const double> q) {
  if (logits.size() != q.size()) throw Error("score loss: size mismatch");
  const auto lp = log_softmax(logits);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s -= q[i] * lp[i];
  return s;
}

ScoreLossGrad score_loss_with_grad(std::span<const double> logits,
                                   std::span<const double> distances) {
  if (logits.size() != distances.size()) throw Error("score loss: size mismatch");
  const std::size_t m = logits.size();
  const auto q = ioc_target_q(distances);
  const auto lp = log_softmax(logits);
  ScoreLossGrad out;
  out.d_logits.resize(m);
  out.d_distances.resize(m);
  double qg = 0.0;  // sum_i q_i * dL/dq_i, with dL/dq_i = -log p_i
  for (std::size_t i = 0; i < m; ++i) {
    out.value -= q[i] * lp[i];
    out.d_logits[i] = std::exp(lp[i]) - q[i];
    qg -= q[i] * lp[i];
  }
  for (std::size_t j = 0; j < m; ++j) out.d_distances[j] = -q[j] * (-lp[j] - qg);
  return out;
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace lanedac
