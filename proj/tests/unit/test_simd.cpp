#include <doctest.h>

#include <vector>

#include "lanedac/rng.hpp"
#include "lanedac/simd/kernels.hpp"
#include "support/oracles.hpp"

using namespace lanedac;

namespace {

std::vector<double> random_vec(SeededRng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

// Restores the process-wide kernel table on scope exit.
struct KernelGuard {
  const simd::KernelTable& saved = simd::active();
  ~KernelGuard() { simd::set_active(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  SeededRng rng(11);
  const auto& k = simd::scalar_kernels();
  for (std::size_t n = 0; n < 40; ++n) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += a[i] * b[i];
    CHECK(k.dot(a.data(), b.data(), n) == doctest::Approx(d).epsilon(1e-12));
    CHECK(k.squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(oracle::squared_distance(a, b)).epsilon(1e-12));
    auto y = b;
    k.axpy(0.5, a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == b[i] + 0.5 * a[i]);
  }
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 variant unavailable on this machine; skipping");
    return;
  }
  const auto& sc = simd::scalar_kernels();
  SeededRng rng(12);
  // Sizes straddle the vector width and the unrolled tail.
  for (std::size_t n = 0; n < 70; ++n) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    CHECK(avx->dot(a.data(), b.data(), n) ==
          doctest::Approx(sc.dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(avx->squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(sc.squared_distance(a.data(), b.data(), n)).epsilon(1e-12));
    auto y1 = b, y2 = b;
    sc.axpy(-1.25, a.data(), y1.data(), n);
    avx->axpy(-1.25, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));
  }
}

TEST_CASE("matrix helpers match naive loops under every kernel table") {
  KernelGuard guard;
  std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
  if (simd::avx2_kernels() != nullptr) tables.push_back(simd::avx2_kernels());
  SeededRng rng(13);
  for (const auto* t : tables) {
    simd::set_active(*t);
    const std::size_t rows = 7, cols = 13;
    const auto w = random_vec(rng, rows * cols), x = random_vec(rng, cols),
               b = random_vec(rng, rows), g = random_vec(rng, rows);
    std::vector<double> y(rows);
    simd::gemv(w, x, b, y);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = b[r];
      for (std::size_t c = 0; c < cols; ++c) s += w[r * cols + c] * x[c];
      CHECK(y[r] == doctest::Approx(s).epsilon(1e-12));
    }
    std::vector<double> out(cols, 1.0);
    simd::gemv_transposed_accumulate(w, g, out);
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 1.0;
      for (std::size_t r = 0; r < rows; ++r) s += w[r * cols + c] * g[r];
      CHECK(out[c] == doctest::Approx(s).epsilon(1e-12));
    }
    std::vector<double> gw(rows * cols, 0.5);
    simd::outer_accumulate(gw, g, x);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        CHECK(gw[r * cols + c] == doctest::Approx(0.5 + g[r] * x[c]).epsilon(1e-12));
      }
    }
    const auto pts = random_vec(rng, 5 * 3), q = random_vec(rng, 3);
    std::vector<double> d(5);
    simd::squared_distances(pts, q, d);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(d[k] == doctest::Approx(oracle::squared_distance(
                                        std::span<const double>(pts).subspan(k * 3, 3), q))
                        .epsilon(1e-12));
    }
  }
}
