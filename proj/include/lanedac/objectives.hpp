#pragma once

// Winner-takes-all objective family expressed as per-hypothesis weights.
//
// Every variant maps a vector of per-hypothesis losses to a weight vector w;
// the combined loss is sum_i w[i] * loss[i]. Selection only looks at the
// ordering of the losses, so gradients flow through the losses alone.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lanedac {

using Weights = std::vector<double>;

enum class Objective { kWta, kRwta, kEwta, kDac };

std::string_view to_string(Objective o);
// Accepts "wta", "rwta", "ewta", "dac". Throws lanedac::Error otherwise.
Objective parse_objective(std::string_view name);

// Index of the smallest loss, lowest index on ties.
std::size_t argmin_index(std::span<const double> losses);

Weights wta_weights(std::span<const double> losses);
Weights rwta_weights(std::span<const double> losses, double eps);
Weights ewta_weights(std::span<const double> losses, std::size_t k);

// Number of hypotheses-tree levels for M hypotheses: ceil(log2 M) + 1.
std::size_t dac_max_depth(std::size_t m);

// Contiguous partition of [0, m) into the level-`depth` sets of the halving
// tree (larger half first). Singletons stop splitting, so fewer than
// 2^(depth-1) sets can come back. Each entry is [begin, end).
std::vector<std::pair<std::size_t, std::size_t>> dac_partition(std::size_t m,
                                                               std::size_t depth);

// Uniform 1/|S| weight on the level-`depth` set S holding the global argmin.
Weights dac_weights(std::span<const double> losses, std::size_t depth);

// k = max(1, M >> floor(iter / interval)).
std::size_t ewta_k_schedule(std::size_t iter, std::size_t m, std::size_t interval);

// depth = min(1 + floor(iter / interval), dac_max_depth(M)).
std::size_t dac_depth_schedule(std::size_t iter, std::size_t m, std::size_t interval);

struct ObjectiveConfig {
  Objective objective = Objective::kDac;
  double eps = 0.05;                 // RWTA residual weight
  std::size_t split_interval = 2000; // DAC split / EWTA halving period, iterations
};

// Weight vector the configured variant assigns at training iteration `iter`.
Weights variant_weights(const ObjectiveConfig& config, std::span<const double> losses,
                        std::size_t iter);

}  // namespace lanedac
