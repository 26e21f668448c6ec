#pragma once

// Dense inner-loop kernels with a scalar reference and optional AVX2 variant.
//
// The variant is chosen once per process: AVX2+FMA when the CPU reports both
// and the build includes them, otherwise scalar. Setting LANEDAC_SIMD=scalar
// in the environment forces the reference path. Variants agree to rounding
// (different summation order), not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace lanedac::simd {

struct KernelTable {
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

const KernelTable& active();

// Overrides the active table (tests and benchmarks). Not thread-safe.
void set_active(const KernelTable& table);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double squared_distance(std::span<const double> a, std::span<const double> b);

// y = W x + b, W row-major with y.size() rows and x.size() columns.
void gemv(std::span<const double> w, std::span<const double> x,
          std::span<const double> b, std::span<double> y);

// out += W^T g, W row-major with g.size() rows and out.size() columns.
void gemv_transposed_accumulate(std::span<const double> w,
                                std::span<const double> g,
                                std::span<double> out);

// G += g x^T, G row-major with g.size() rows and x.size() columns.
void outer_accumulate(std::span<double> grad_w, std::span<const double> g,
                      std::span<const double> x);

// out[k] = |points[k] - query|^2 for `points` packed row-major with
// query.size() columns.
void squared_distances(std::span<const double> points,
                       std::span<const double> query, std::span<double> out);

}  // namespace lanedac::simd
