#include "fracdecay/kernels.hpp"

#include <algorithm>

namespace fracdecay::kernels {

void convolve_serial(const double* w0, const double* w1, const double* v, std::size_t n_max,
                     double* out) {
  out[0] = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += (w0[j] - w1[j]) * v[n - j] + w1[j] * v[n - j - 1];
    out[n] = s;
  }
}

void convolve_omp(const double* w0, const double* w1, const double* v, std::size_t n_max,
                  double* out) {
  out[0] = 0.0;
  const long long nn = static_cast<long long>(n_max);
  // row n costs O(n); dynamic chunks keep the threads balanced
#pragma omp parallel for schedule(dynamic, 64)
  for (long long n = 1; n <= nn; ++n) {
    double s = 0.0;
    for (long long j = 0; j < n; ++j) s += (w0[j] - w1[j]) * v[n - j] + w1[j] * v[n - j - 1];
    out[n] = s;
  }
}

void history_sum_serial(const double* coef, std::size_t levels, const double* data,
                        std::size_t stride, std::size_t width, double* out) {
  std::fill(out, out + width, 0.0);
  for (std::size_t j = 0; j < levels; ++j) {
    const double c = coef[j];
    const double* row = data + j * stride;
    for (std::size_t i = 0; i < width; ++i) out[i] += c * row[i];
  }
}

void history_sum_omp(const double* coef, std::size_t levels, const double* data,
                     std::size_t stride, std::size_t width, double* out) {
  // split the spatial range; each thread walks all levels for its block so
  // the per-entry summation order matches the serial loop
  constexpr long long block = 32;
  const long long w = static_cast<long long>(width);
#pragma omp parallel for schedule(static)
  for (long long lo = 0; lo < w; lo += block) {
    const long long hi = std::min(w, lo + block);
    for (long long i = lo; i < hi; ++i) out[i] = 0.0;
    for (std::size_t j = 0; j < levels; ++j) {
      const double c = coef[j];
      const double* row = data + j * stride;
      for (long long i = lo; i < hi; ++i) out[i] += c * row[i];
    }
  }
}

}  // namespace fracdecay::kernels
