#pragma once

#include <cstdint>

namespace lanedac {

// SplitMix64, used to expand a 64-bit seed into generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

// xoshiro256** seeded through SplitMix64. Identical seeds give identical
// streams on every platform; uniform() and normal() use only IEEE arithmetic
// plus std::log/std::sqrt/std::cos.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t next_u64();
  // [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller (cached second variate).
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent child seed (for per-scenario or per-variant streams).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lanedac
