#pragma once

// The coupled fractional ODE system
//   d^alpha (U - a) + eta1 U - mu1 V = F,
//   d^beta  (V - b) - mu2 U + eta2 V = G,
// solved by Picard iteration on its Volterra form, and for the special case
// a = 1, b = F = G = 0, eta1 = eta2 = c1, mu1 = mu2 = c2 by Laplace inversion
// along the branch cut.

#include <complex>
#include <functional>
#include <vector>

namespace fracdecay {

struct OdeSpec {
  double alpha = 1.0;  // (0, 1]
  double beta = 1.0;   // (0, alpha]
  double a = 0.0, b = 0.0;
  double eta1 = 0.0, eta2 = 0.0;
  double mu1 = 0.0, mu2 = 0.0;
  std::function<double(double)> F;  // empty means zero
  std::function<double(double)> G;
};

struct OdePath {
  std::vector<double> times;
  std::vector<double> U, V;
  int iterations = 0;
  bool converged = false;
  double last_update = 0.0;  // sup-norm change of the final sweep
  // every sweep, starting from (U_0, V_0) = (0, 0); filled on request
  std::vector<std::vector<double>> U_iterates, V_iterates;
};

struct PicardOptions {
  double tol = 1e-12;
  int max_iter = 200;
  bool keep_iterates = false;
  bool parallel = true;  // OpenMP convolution kernel; false uses the serial reference
};

/// Product-integration weights of k(tau) = tau^{eta-1} E_{eta,eta}(-c tau^eta)
/// on the uniform grid t_j = j dt: w0[j] is the integral of k over
/// [t_j, t_{j+1}], w1[j] the integral of k (tau - t_j) / dt. Both are
/// nonnegative.
struct ConvolutionWeights {
  double dt = 0.0;
  std::vector<double> w0, w1;
};
ConvolutionWeights convolution_weights(double eta, double c, double dt, int n);

/// Fixed point of the integral map on the uniform grid of n_steps + 1 points
/// over [0, T]. Non-convergence within max_iter returns the last iterate
/// with converged = false. Invalid input throws DomainError.
OdePath picard_solve(const OdeSpec& spec, double T, int n_steps, const PicardOptions& opt = {});

/// True when every recorded sweep is pointwise >= its predecessor. Changes
/// below the rounding level of the iterates (1e-14 of their sup norm) are
/// not counted as decreases.
bool picard_monotonicity(const OdePath& path);

struct LaplaceSymbol {
  double alpha = 1.0, beta = 0.5;
  double c1 = 2.0, c2 = 1.0;
};

/// Denominator (s^alpha + c1)(s^beta + c1) - c2^2 on the upper lip of the
/// negative axis, s = r e^{i pi}, in expanded closed form.
std::complex<double> q_of_r(const LaplaceSymbol& sym, double r);

/// Closed forms of Im(e^{i alpha pi} conj q) and Im(p conj q), where
/// p(r) = e^{i alpha pi}(r^beta e^{i beta pi} + c1).
struct ImParts {
  double im_eq;  // Im(e^{i alpha pi} conj q(r))
  double im_pq;  // Im(p(r) conj q(r))
};
ImParts im_parts(const LaplaceSymbol& sym, double r);

/// Denominator on the principal branch, and its derivative.
std::complex<double> symbol_denominator(const LaplaceSymbol& sym, std::complex<double> s);
std::complex<double> symbol_denominator_prime(const LaplaceSymbol& sym, std::complex<double> s);

/// Zeros of the denominator counted by the argument principle along the
/// boundary of [x0, x1] x [y0, y1]. Each edge starts from min_samples points
/// and is refined until consecutive phase steps stay below pi/4.
int count_zeros(const LaplaceSymbol& sym, double x0, double x1, double y0, double y1,
                int min_samples = 64);

/// Default search radius 4 max(c1, c2)^{1/min(alpha, beta)}.
double default_pole_radius(const LaplaceSymbol& sym);

/// All zeros with |Re s|, Im s inside the radius (conjugate pairs included).
/// Requires c1 > c2 > 0 and min(alpha, beta) < 1 (DomainError). A zero with
/// Re s >= 0 or Im s == 0 throws NumericalError.
std::vector<std::complex<double>> find_poles(const LaplaceSymbol& sym, double search_radius);

struct InversionResult {
  double U = 0.0, V = 0.0;
  double U_residue = 0.0, V_residue = 0.0;
  double U_branch = 0.0, V_branch = 0.0;
  double quad_error = 0.0;  // absolute, summed over both integrals
  int poles = 0;
};

/// U(t), V(t) of the special system from residues plus the branch-cut
/// integrals. t < 1 throws UnsupportedRange; quadrature failure throws
/// NumericalError.
InversionResult branch_cut_invert(const LaplaceSymbol& sym, double t);

/// Same for many times, reusing one pole search.
std::vector<InversionResult> branch_cut_invert(const LaplaceSymbol& sym,
                                               const std::vector<double>& times);

/// kappa0 / C_Omega^2 > max(c12_sup, c21_sup).
bool check_decay_assumption(double kappa0, double C_Omega, double c12_sup, double c21_sup);

/// Optimal Poincare constant on (0, L).
double poincare_constant(double L);

}  // namespace fracdecay
