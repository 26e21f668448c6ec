#include <cassert>
#include <cstdlib>
#include <string_view>

#include "lanedac/simd/kernels.hpp"

namespace lanedac::simd {

#if defined(LANEDAC_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(LANEDAC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* select_default() {
  const char* env = std::getenv("LANEDAC_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

const KernelTable*& active_slot() {
  static const KernelTable* table = select_default();
  return table;
}

}  // namespace

const KernelTable& active() { return *active_slot(); }

void set_active(const KernelTable& table) { active_slot() = &table; }

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().squared_distance(a.data(), b.data(), a.size());
}

void gemv(std::span<const double> w, std::span<const double> x,
          std::span<const double> b, std::span<double> y) {
  const std::size_t cols = x.size();
  assert(w.size() == y.size() * cols && b.size() == y.size());
  const KernelTable& k = active();
  for (std::size_t r = 0; r < y.size(); ++r) {
    y[r] = b[r] + k.dot(w.data() + r * cols, x.data(), cols);
  }
}

void gemv_transposed_accumulate(std::span<const double> w,
                                std::span<const double> g,
                                std::span<double> out) {
  const std::size_t cols = out.size();
  assert(w.size() == g.size() * cols);
  const KernelTable& k = active();
  for (std::size_t r = 0; r < g.size(); ++r) {
    if (g[r] != 0.0) k.axpy(g[r], w.data() + r * cols, out.data(), cols);
  }
}

void outer_accumulate(std::span<double> grad_w, std::span<const double> g,
                      std::span<const double> x) {
  const std::size_t cols = x.size();
  assert(grad_w.size() == g.size() * cols);
  const KernelTable& k = active();
  for (std::size_t r = 0; r < g.size(); ++r) {
    if (g[r] != 0.0) k.axpy(g[r], x.data(), grad_w.data() + r * cols, cols);
  }
}

void squared_distances(std::span<const double> points,
                       std::span<const double> query, std::span<double> out) {
  const std::size_t dim = query.size();
  assert(points.size() == out.size() * dim);
  const KernelTable& k = active();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = k.squared_distance(points.data() + i * dim, query.data(), dim);
  }
}

}  // namespace lanedac::simd
