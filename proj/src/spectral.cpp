#include "fracdecay/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracdecay/errors.hpp"
#include "fracdecay/quadrature.hpp"
#include "fracdecay/special.hpp"

namespace fracdecay {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(double beta, const char* who) {
  if (!(beta > 0.0 && beta < 1.0)) {
    std::ostringstream os;
    os << who << ": beta = " << beta << " not in (0,1)";
    throw DomainError(os.str());
  }
}

double mode_convolution(const MittagLeffler& ml, double lambda, double beta, double t) {
  auto f = [&](double tau) {
    return relaxation_kernel(ml, lambda, tau) * std::exp(-lambda * (t - tau));
  };
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  // [0, a] carries the tau^{beta-1} singularity, [t - w, t] the e^{-lambda(t-tau)} peak
  const double a = std::min(t, 1.0);
  const double w = std::min(t - a, 50.0 / lambda);
  double total = 0.0;
  bool ok = true;
  auto add = [&](const QuadResult& r) {
    total += r.value;
    ok = ok && r.converged;
  };
  add(integrate_left_power(f, 0.0, a, beta, opt));
  if (t - w > a) add(integrate(f, a, t - w, opt));
  if (w > 0.0) add(integrate(f, t - w, t, opt));
  if (!ok) {
    std::ostringstream os;
    os << "mode_convolution: quadrature did not converge (lambda=" << lambda << ", beta=" << beta
       << ", t=" << t << ")";
    throw NumericalError(os.str());
  }
  return total;
}

}  // namespace

double eigenvalue(int n) { return static_cast<double>(n) * n; }

double eigenfunction(int n, double x) { return std::sqrt(2.0 / kPi) * std::sin(n * x); }

std::vector<double> project_initial(const std::function<double(double)>& u0, int n_modes) {
  std::vector<double> c(n_modes);
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-15;
  for (int n = 1; n <= n_modes; ++n) {
    auto f = [&](double x) { return u0(x) * eigenfunction(n, x); };
    // split at the midpoint, where the tent profile has its kink
    c[n - 1] = integrate(f, 0.0, 0.5 * kPi, opt).value + integrate(f, 0.5 * kPi, kPi, opt).value;
  }
  return c;
}

double mode_convolution(double lambda, double beta, double t) {
  check_beta(beta, "mode_convolution");
  if (!(t > 0.0)) throw DomainError("mode_convolution: t must be positive");
  return mode_convolution(MittagLeffler(beta, beta), lambda, beta, t);
}

SpectralSolution decoupled_solve(const std::vector<double>& u0_coeffs, double beta, double t,
                                 int n_modes) {
  check_beta(beta, "decoupled_solve");
  if (!(t > 0.0)) throw DomainError("decoupled_solve: t must be positive");
  SpectralSolution s;
  s.beta = beta;
  s.t = t;
  s.n_modes = std::min<int>(n_modes, static_cast<int>(u0_coeffs.size()));
  s.u0_coeffs.assign(u0_coeffs.begin(), u0_coeffs.begin() + s.n_modes);
  s.u_coeffs.resize(s.n_modes);
  s.v_coeffs.resize(s.n_modes);
  const MittagLeffler ml(beta, beta);
  for (int n = 1; n <= s.n_modes; ++n) {
    const double lam = eigenvalue(n), c = s.u0_coeffs[n - 1];
    s.u_coeffs[n - 1] = c * std::exp(-lam * t);
    s.v_coeffs[n - 1] = c == 0.0 ? 0.0 : c * mode_convolution(ml, lam, beta, t);
  }
  // dropped modes: |v_n| <= |(u0,phi_n)| / lambda_n^2 (the kernel integrates
  // to at most 1/lambda_n, the heat factor to at most 1/lambda_n)
  double tail = 0.0;
  for (std::size_t n = s.n_modes + 1; n <= u0_coeffs.size(); ++n) {
    const double lam = eigenvalue(static_cast<int>(n));
    tail += std::pow(u0_coeffs[n - 1] / (lam * lam), 2);
  }
  s.tail_estimate = std::sqrt(tail);
  return s;
}

double q_integral(double t, int j, int k, double beta) {
  if (!(t > 0.0) || j < 0 || k < j) {
    std::ostringstream os;
    os << "q_integral: needs t > 0 and 0 <= j <= k, got t=" << t << " j=" << j << " k=" << k;
    throw DomainError(os.str());
  }
  const double p = beta * (j + 1) + k - j;
  return std::pow(t, p) * rgamma(p + 1.0);
}

std::pair<double, double> r_series_identity(double lambda, double beta, double t, int k_max) {
  check_beta(beta, "r_series_identity");
  if (lambda * t > 5.0) {
    std::ostringstream os;
    os << "r_series_identity: lambda t = " << lambda * t
       << " > 5; the alternating series needs extended precision there";
    throw UnsupportedRange(os.str());
  }
  double lhs = 0.0, rhs = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    double inner = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double p = beta * j + (k - j);
      inner += std::pow(t, p) * rgamma(p + beta + 1.0);
    }
    lhs += std::pow(-lambda, k) * inner;
    const MittagLeffler e(1.0, beta * (k + 1) + 1.0);
    rhs += std::pow(-lambda * std::pow(t, beta), k) * e(-lambda * t);
  }
  return {lhs, rhs};
}

std::vector<double> asymptotic_v(const std::vector<double>& u0_coeffs, double beta, double t) {
  check_beta(beta, "asymptotic_v");
  if (!(t >= 10.0)) throw UnsupportedRange("asymptotic_v: needs t >= 10");
  const double c1 = -rgamma(-beta), c2 = rgamma(-2.0 * beta), c3 = rgamma(-1.0 - beta);
  const double t1 = std::pow(t, -(1.0 + beta)), t2 = std::pow(t, -(1.0 + 2.0 * beta)),
               t3 = std::pow(t, -(2.0 + beta));
  std::vector<double> v(u0_coeffs.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double lam = eigenvalue(static_cast<int>(i + 1));
    const double l3 = lam * lam * lam;
    v[i] = u0_coeffs[i] * (c1 * t1 / l3 + (c2 * t2 + c3 * t3) / (l3 * lam));
  }
  return v;
}

std::vector<double> leading_v(const std::vector<double>& u0_coeffs, double beta, double t) {
  check_beta(beta, "leading_v");
  const double f = std::pow(t, -(1.0 + beta)) / -gamma_fn(-beta);
  std::vector<double> v = limit_profile(u0_coeffs);
  for (double& x : v) x *= f;
  return v;
}

std::vector<double> limit_profile(const std::vector<double>& u0_coeffs) {
  std::vector<double> u(u0_coeffs.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lam = eigenvalue(static_cast<int>(i + 1));
    u[i] = u0_coeffs[i] / (lam * lam * lam);
  }
  return u;
}

double coefficient_norm(const std::vector<double>& coeffs) {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

}  // namespace fracdecay
