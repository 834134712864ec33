#pragma once

// Independent reference computations for the tests: MPFR series, Boost
// quadrature, dense elimination. Nothing here calls library numerics.

#include <functional>
#include <vector>

namespace oracle {

/// E_{eta,mu}(z), z <= 0, by the power series in MPFR with precision raised
/// to cover the cancellation (|z|^{1/eta} up to a few hundred).
double ml_series(double eta, double mu, double z);

/// E_{eta,1}(-x) and E_{eta,eta}(-x) for 0 < eta < 1, x > 0, from the
/// Laplace-type integral over the branch cut (Boost exp-sinh, long double).
double ml_one_integral(double eta, double x);
double ml_eta_integral(double eta, double x);

/// Gamma in MPFR at 200 bits.
double gamma(double x);

/// Integral of f over [a, b] by Boost tanh-sinh.
double integrate(const std::function<double(double)>& f, double a, double b);

/// Gaussian elimination with partial pivoting in long double on a dense copy.
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b);

}  // namespace oracle
