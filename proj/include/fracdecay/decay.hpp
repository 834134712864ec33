#pragma once

// Power-law decay diagnostics for norm time series.

#include <cstddef>
#include <vector>

namespace fracdecay {

struct NormSeries {
  std::vector<double> times;
  std::vector<double> values;
};

struct DecayWindow {
  double t_lo = 200.0;
  double t_hi = 1000.0;
};

struct DecayFit {
  DecayWindow window;
  double exponent = 0.0;  // slope of ln value against ln t
  double intercept = 0.0;
  double rms_residual = 0.0;
  int samples = 0;
};

/// ln(value) / ln(t) per sample. Needs t > 1 and value > 0 (DomainError).
NormSeries pointwise_exponent(const NormSeries& s);

/// Least-squares line through (ln t, ln value) over the samples inside the
/// window. Fewer than 10 samples, or a zero value inside, throw DomainError.
DecayFit fit_exponent(const NormSeries& s, const DecayWindow& w);

/// count log-uniform times across the window, values interpolated linearly
/// in (ln t, ln value). Zero values inside the window throw DomainError.
NormSeries log_uniform_resample(const NormSeries& s, const DecayWindow& w, int count);

/// fit_exponent on log_uniform_resample(s, w, count).
DecayFit fit_exponent_log_uniform(const NormSeries& s, const DecayWindow& w, int count = 64);

/// Trapezoid approximation of (int |u|^2 dx)^{1/2}; the profile includes both
/// boundary nodes.
double l2_norm(const double* profile, std::size_t nodes, double dx);
double l2_norm(const std::vector<double>& profile, double dx);

}  // namespace fracdecay
