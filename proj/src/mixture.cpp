#include "lanedac/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lanedac/error.hpp"
#include "lanedac/losses.hpp"
#include "lanedac/simd/kernels.hpp"

namespace lanedac {

namespace {

void check_means(const std::vector<double>& means, std::size_t dim, std::size_t m) {
  if (dim == 0 || m == 0 || means.size() != m * dim) {
    throw Error("mixture means must be M x dim with M >= 1");
  }
}

}  // namespace

MixtureModel mixture_from_logits(std::vector<double> means, std::size_t dim,
                                 std::span<const double> logits, double sigma) {
  check_means(means, dim, logits.size());
  if (!(sigma > 0.0)) throw Error("mixture sigma must be positive");
  return MixtureModel{dim, std::move(means), softmax(logits), sigma};
}

MixtureModel mixture_from_counts(std::vector<double> means, std::size_t dim,
                                 std::span<const double> counts, double sigma) {
  check_means(means, dim, counts.size());
  if (!(sigma > 0.0)) throw Error("mixture sigma must be positive");
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw Error("mixture counts must be non-negative");
    total += c;
  }
  if (!(total > 0.0)) throw Error("mixture counts are all zero");
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = counts[i] / total;
  return MixtureModel{dim, std::move(means), std::move(w), sigma};
}

double log_likelihood(const MixtureModel& mixture, std::span<const double> point) {
  if (point.size() != mixture.dim) throw Error("point dimension does not match the mixture");
  const std::size_t m = mixture.size();
  const double var = mixture.sigma * mixture.sigma;
  const double log_norm =
      -0.5 * static_cast<double>(mixture.dim) * std::log(2.0 * std::numbers::pi * var);
  std::vector<double> d2(m);
  simd::squared_distances(mixture.means, point, d2);
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(m, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i) {
    if (mixture.weights[i] <= 0.0) continue;
    terms[i] = std::log(mixture.weights[i]) - 0.5 * d2[i] / var;
    mx = std::max(mx, terms[i]);
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return log_norm + mx + std::log(s);
}

std::vector<double> SigmaGrid::values() const {
  if (!(lo > 0.0 && hi >= lo) || count == 0) throw Error("invalid sigma grid");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

double fit_sigma(std::span<const MixtureModel> mixtures,
                 std::span<const std::vector<double>> heldout, const SigmaGrid& grid) {
  if (mixtures.size() != heldout.size() || mixtures.empty()) {
    throw Error("fit_sigma: need one held-out set per mixture");
  }
  double best_sigma = grid.lo;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (double sigma : grid.values()) {
    double ll = 0.0;
    for (std::size_t k = 0; k < mixtures.size(); ++k) {
      MixtureModel mm = mixtures[k];
      mm.sigma = sigma;
      const auto& pts = heldout[k];
      for (std::size_t p = 0; p + mm.dim <= pts.size(); p += mm.dim) {
        ll += log_likelihood(mm, std::span<const double>(pts).subspan(p, mm.dim));
      }
    }
    if (ll > best_ll) {
      best_ll = ll;
      best_sigma = sigma;
    }
  }
  return best_sigma;
}

}  // namespace lanedac
