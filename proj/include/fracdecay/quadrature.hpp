#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature.

#include <functional>

namespace fracdecay {

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod-Gauss difference summed over the final partition
  int intervals = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Integral of f over [a, b].
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt = {});

/// Integral over [a, b] of an f that behaves like (x - a)^{p-1} near a, 0 < p <= 1.
/// The map x = a + (b - a) s^{1/p} cancels the power, so the transformed
/// integrand is smooth when f / (x - a)^{p-1} is.
QuadResult integrate_left_power(const Integrand& f, double a, double b, double p,
                                const QuadOptions& opt = {});

/// Integral over [a, b] of (b - x)^{p-1} g(x), 0 < p <= 1, g smooth.
/// The weight is applied analytically: near b the point b - h rounds to b
/// long before h underflows, so f(x) alone cannot carry the singularity there.
QuadResult integrate_right_weighted(const Integrand& g, double a, double b, double p,
                                    const QuadOptions& opt = {});

/// Integral of f over [a, inf) through x = a + s / (1 - s).
QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadOptions& opt = {});

}  // namespace fracdecay
