#pragma once

// Hot loops shared by the Picard and L1 solvers. Each has a plain serial
// version kept as the reference and an OpenMP version; both accumulate every
// output in the same order, so their results are bitwise equal.

#include <cstddef>

namespace fracdecay::kernels {

/// Product-integration convolution on a uniform grid:
///   out[n] = sum_{j<n} (w0[j] - w1[j]) v[n-j] + w1[j] v[n-j-1],  n = 1..n_max,
/// out[0] = 0. w0, w1 hold n_max entries, v and out n_max + 1.
void convolve_serial(const double* w0, const double* w1, const double* v, std::size_t n_max,
                     double* out);
void convolve_omp(const double* w0, const double* w1, const double* v, std::size_t n_max,
                  double* out);

/// Weighted sum over stored time levels:
///   out[i] = sum_{j=0}^{levels-1} coef[j] * data[j * stride + i],  i < width.
void history_sum_serial(const double* coef, std::size_t levels, const double* data,
                        std::size_t stride, std::size_t width, double* out);
void history_sum_omp(const double* coef, std::size_t levels, const double* data,
                     std::size_t stride, std::size_t width, double* out);

}  // namespace fracdecay::kernels
