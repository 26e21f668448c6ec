#include "lanedac/objectives.hpp"

#include <algorithm>
#include <numeric>

#include "lanedac/error.hpp"

namespace lanedac {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::kWta: return "wta";
    case Objective::kRwta: return "rwta";
    case Objective::kEwta: return "ewta";
    case Objective::kDac: return "dac";
  }
  return "unknown";
}

Objective parse_objective(std::string_view name) {
  if (name == "wta") return Objective::kWta;
  if (name == "rwta") return Objective::kRwta;
  if (name == "ewta") return Objective::kEwta;
  if (name == "dac") return Objective::kDac;
  throw Error("unknown objective '" + std::string(name) + "' (expected wta|rwta|ewta|dac)");
}

std::size_t argmin_index(std::span<const double> losses) {
  if (losses.empty()) throw Error("loss vector is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < losses.size(); ++i) {
    if (losses[i] < losses[best]) best = i;
  }
  return best;
}

Weights wta_weights(std::span<const double> losses) {
  Weights w(losses.size(), 0.0);
  w[argmin_index(losses)] = 1.0;
  return w;
}

Weights rwta_weights(std::span<const double> losses, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error("rwta eps must lie in (0, 1)");
  Weights w(losses.size(), eps);
  w[argmin_index(losses)] = 1.0;
  return w;
}

Weights ewta_weights(std::span<const double> losses, std::size_t k) {
  const std::size_t m = losses.size();
  if (m == 0) throw Error("loss vector is empty");
  if (k < 1 || k > m) throw Error("ewta k must lie in [1, M]");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
  Weights w(m, 0.0);
  const double share = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) w[order[i]] = share;
  return w;
}

std::size_t dac_max_depth(std::size_t m) {
  if (m == 0) throw Error("M must be at least 1");
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < m) ++levels;
  return levels + 1;
}

std::vector<std::pair<std::size_t, std::size_t>> dac_partition(std::size_t m,
                                                               std::size_t depth) {
  if (depth < 1 || depth > dac_max_depth(m)) {
    throw Error("dac depth must lie in [1, ceil(log2 M) + 1]");
  }
  std::vector<std::pair<std::size_t, std::size_t>> sets{{0, m}};
  for (std::size_t level = 2; level <= depth; ++level) {
    std::vector<std::pair<std::size_t, std::size_t>> next;
    next.reserve(sets.size() * 2);
    for (auto [b, e] : sets) {
      const std::size_t n = e - b;
      if (n <= 1) {
        next.emplace_back(b, e);
        continue;
      }
      const std::size_t first = (n + 1) / 2;
      next.emplace_back(b, b + first);
      next.emplace_back(b + first, e);
    }
    sets = std::move(next);
  }
  return sets;
}

Weights dac_weights(std::span<const double> losses, std::size_t depth) {
  const std::size_t m = losses.size();
  const std::size_t winner = argmin_index(losses);
  Weights w(m, 0.0);
  for (auto [b, e] : dac_partition(m, depth)) {
    if (winner < b || winner >= e) continue;
    const double share = 1.0 / static_cast<double>(e - b);
    for (std::size_t i = b; i < e; ++i) w[i] = share;
    break;
  }
  return w;
}

std::size_t ewta_k_schedule(std::size_t iter, std::size_t m, std::size_t interval) {
  if (interval < 1) throw Error("schedule interval must be >= 1");
  const std::size_t halvings = iter / interval;
  if (halvings >= 64) return 1;
  return std::max<std::size_t>(1, m >> halvings);
}

std::size_t dac_depth_schedule(std::size_t iter, std::size_t m, std::size_t interval) {
  if (interval < 1) throw Error("schedule interval must be >= 1");
  return std::min(1 + iter / interval, dac_max_depth(m));
}

Weights variant_weights(const ObjectiveConfig& config, std::span<const double> losses,
                        std::size_t iter) {
  const std::size_t m = losses.size();
  switch (config.objective) {
    case Objective::kWta:
      return wta_weights(losses);
    case Objective::kRwta:
      if (m == 1) return wta_weights(losses);
      return rwta_weights(losses, config.eps);
    case Objective::kEwta:
      return ewta_weights(losses, ewta_k_schedule(iter, m, config.split_interval));
    case Objective::kDac:
      return dac_weights(losses, dac_depth_schedule(iter, m, config.split_interval));
  }
  throw Error("unhandled objective");
}

}  // namespace lanedac
