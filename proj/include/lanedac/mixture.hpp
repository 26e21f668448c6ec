#pragma once

// Second-stage mixture over hypotheses: isotropic Gaussians centred on the
// hypotheses, with weights from soft-assignment logits or win frequencies,
// and a shared sigma chosen by held-out likelihood.

#include <cstddef>
#include <span>
#include <vector>

namespace lanedac {

struct MixtureModel {
  std::size_t dim = 2;
  std::vector<double> means;    // M x dim
  std::vector<double> weights;  // M, sums to 1
  double sigma = 1.0;

  std::size_t size() const { return weights.size(); }
};

MixtureModel mixture_from_logits(std::vector<double> means, std::size_t dim,
                                 std::span<const double> logits, double sigma);

// Weights proportional to counts. Throws lanedac::Error if all counts are 0.
MixtureModel mixture_from_counts(std::vector<double> means, std::size_t dim,
                                 std::span<const double> counts, double sigma);

double log_likelihood(const MixtureModel& mixture, std::span<const double> point);

struct SigmaGrid {
  double lo = 1e-2;
  double hi = 1e1;
  std::size_t count = 61;  // log-spaced, inclusive of both ends

  std::vector<double> values() const;
};

// Sigma maximizing sum over k of the log-likelihood of heldout[k] under
// mixtures[k] (with its sigma replaced). Ties keep the smaller sigma.
double fit_sigma(std::span<const MixtureModel> mixtures,
                 std::span<const std::vector<double>> heldout, const SigmaGrid& grid);

}  // namespace lanedac
