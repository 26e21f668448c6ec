#pragma once

// Per-hypothesis reconstruction losses and the IOC-style ranking loss.
//
// Hypotheses are packed row-major: preds[m * D + j], with D = steps * 2 for
// 2-D trajectories. The L2 convention is the mean over timesteps of the
// squared Euclidean distance.

#include <cstddef>
#include <span>
#include <vector>

namespace lanedac {

// values[m] = (1/steps) * sum_t |pred_m,t - target_t|^2 with
// steps = target.size() / point_dim.
std::vector<double> per_hypothesis_l2(std::span<const double> preds,
                                      std::span<const double> target,
                                      std::size_t point_dim = 2);

std::vector<double> softmax(std::span<const double> logits);
std::vector<double> log_softmax(std::span<const double> logits);

// q = softmax(-d).
std::vector<double> ioc_target_q(std::span<const double> distances);

// Cross-entropy -sum_m q[m] * log softmax(logits)[m].
double score_loss(std::span<const double> logits, std::span<const double> q);

struct ScoreLossGrad {
  double value = 0.0;
  std::vector<double> d_logits;     // softmax(logits) - q
  std::vector<double> d_distances;  // through q = softmax(-d)
};

// Score loss and its gradient with respect to both the logits and the
// distances the target distribution was built from.
ScoreLossGrad score_loss_with_grad(std::span<const double> logits,
                                   std::span<const double> distances);

double entropy(std::span<const double> p);

}  // namespace lanedac
