#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace oracle {

using boost::multiprecision::mpfr_float;

double ml_series(double eta, double mu, double z) {
  const double x = -z;
  const double X = x > 0.0 ? std::pow(x, 1.0 / eta) : 0.0;
  // terms grow to about e^X before cancelling: carry that many extra bits
  const unsigned bits = static_cast<unsigned>(1.45 * X + 160.0);
  const unsigned digits = static_cast<unsigned>(bits * 0.302) + 10;
  mpfr_float::default_precision(digits);
  const mpfr_float e(eta), m(mu), mz(z), tiny("1e-40");
  mpfr_float p(1), s(0), c(0);
  for (int k = 0; k < 200000; ++k) {
    const mpfr_float arg = e * k + m;
    // 1/Gamma is zero at the poles
    mpfr_float term = 0;
    if (!(arg <= 0 && arg == floor(arg))) term = p / boost::multiprecision::tgamma(arg);
    // compensated (Kahan) summation
    const mpfr_float y = term - c;
    const mpfr_float t = s + y;
    c = (t - s) - y;
    s = t;
    if (k > 200 && k * eta > X && abs(term) <= tiny * abs(s)) return s.convert_to<double>();
    p *= mz;
  }
  throw std::runtime_error("oracle::ml_series did not converge");
}

namespace {

// E_{eta,1}(-t^eta) = (sin eta pi / pi) int_0^inf e^{-r t} r^{eta-1} / (r^{2eta} + 2 r^eta cos eta pi + 1) dr
long double branch_integral(double eta, double x, bool kernel) {
  using boost::math::quadrature::exp_sinh;
  const long double e = eta, pi = std::numbers::pi_v<long double>;
  const long double t = std::pow(static_cast<long double>(x), 1.0L / e);
  const long double ce = std::cos(e * pi), se = std::sin(e * pi);
  // substitute s = r t so the exponential is parameter free
  auto f = [&](long double s) -> long double {
    if (s == 0.0L) return 0.0L;
    const long double r = s / t, re = std::pow(r, e);
    const long double den = re * re + 2.0L * re * ce + 1.0L;
    const long double w = kernel ? re : re / r;
    return std::exp(-s) * w / den / t;
  };
  exp_sinh<long double> integrator;
  long double v = integrator.integrate(f, 0.0L, std::numeric_limits<long double>::infinity());
  v *= se / pi;
  // t^{eta-1} E_{eta,eta}(-t^eta) = (sin eta pi / pi) int e^{-rt} r^eta / den dr
  if (kernel) v *= std::pow(t, 1.0L - e);
  return v;
}

}  // namespace

double ml_one_integral(double eta, double x) {
  return static_cast<double>(branch_integral(eta, x, false));
}

double ml_eta_integral(double eta, double x) {
  return static_cast<double>(branch_integral(eta, x, true));
}

double gamma(double x) {
  mpfr_float::default_precision(60);
  return boost::multiprecision::tgamma(mpfr_float(x)).convert_to<double>();
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b);
}

std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<std::vector<long double>> M(n, std::vector<long double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
    M[i][n] = b[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(M[i][k]) > std::fabs(M[p][k])) p = i;
    std::swap(M[k], M[p]);
    if (M[k][k] == 0.0L) throw std::runtime_error("oracle::dense_solve: singular");
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = M[i][k] / M[k][k];
      for (std::size_t j = k; j <= n; ++j) M[i][j] -= f * M[k][j];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = M[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= M[i][j] * x[j];
    x[i] = static_cast<double>(s / M[i][i]);
  }
  return x;
}

}  // namespace oracle
