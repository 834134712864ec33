#pragma once

// Eigenmode solution of the decoupled pair
//   u_t - u_xx = 0,   d^beta v - v_xx = u,   u(0) = u0, v(0) = 0
// on (0, pi) with Dirichlet data: lambda_n = n^2, phi_n = sqrt(2/pi) sin(n x).

#include <functional>
#include <utility>
#include <vector>

namespace fracdecay {

double eigenvalue(int n);
double eigenfunction(int n, double x);

/// (u0, phi_n) for n = 1..n_modes by adaptive quadrature.
std::vector<double> project_initial(const std::function<double(double)>& u0, int n_modes);

/// int_0^t tau^{beta-1} E_{beta,beta}(-lambda tau^beta) e^{-lambda (t - tau)} dtau.
double mode_convolution(double lambda, double beta, double t);

struct SpectralSolution {
  double beta = 0.5;
  double t = 0.0;
  int n_modes = 0;
  std::vector<double> u0_coeffs;
  std::vector<double> u_coeffs, v_coeffs;
  double tail_estimate = 0.0;  // bound on the L2 norm dropped by truncation
};

/// u_n(t) = e^{-lambda_n t}(u0, phi_n), v_n(t) = (u0, phi_n) times the mode
/// convolution. Needs 0 < beta < 1 and t > 0 (DomainError).
SpectralSolution decoupled_solve(const std::vector<double>& u0_coeffs, double beta, double t,
                                 int n_modes = 64);

/// t^{beta(j+1)+k-j} / Gamma(beta j + k - j + beta + 1).
double q_integral(double t, int j, int k, double beta);

/// Both orderings of the double series R(t), truncated at k_max:
/// lhs by total degree, rhs grouped as sum (-lambda t^beta)^k E_{1,beta(k+1)+1}(-lambda t).
/// lambda t > 5 throws UnsupportedRange.
std::pair<double, double> r_series_identity(double lambda, double beta, double t, int k_max);

/// Large-t expansion of the v coefficients:
///   (u0,phi_n) [ t^{-(1+beta)} / (lambda^3 (-Gamma(-beta)))
///              + t^{-(1+2beta)} / (lambda^4 Gamma(-2beta))
///              + t^{-(2+beta)} / (lambda^4 Gamma(-1-beta)) ],
/// with 1/Gamma read as 0 at the poles. t < 10 throws UnsupportedRange.
std::vector<double> asymptotic_v(const std::vector<double>& u0_coeffs, double beta, double t);

/// Leading term only: u_inf_n t^{-(1+beta)} / (-Gamma(-beta)).
std::vector<double> leading_v(const std::vector<double>& u0_coeffs, double beta, double t);

/// Coefficients of the limit profile A^{-3} u0: (u0, phi_n) / lambda_n^3.
std::vector<double> limit_profile(const std::vector<double>& u0_coeffs);

/// L2 norm from mode coefficients (Parseval).
double coefficient_norm(const std::vector<double>& coeffs);

}  // namespace fracdecay
