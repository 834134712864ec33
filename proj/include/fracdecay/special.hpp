#pragma once

// Gamma and two-parameter Mittag-Leffler functions on the negative real axis.

#include <cstddef>
#include <vector>

namespace fracdecay {

/// Gamma function. Negative non-integer arguments go through the reflection
/// formula; non-positive integers throw DomainError.
double gamma_fn(double x);

/// 1/Gamma(x), exactly 0 at the poles x = 0, -1, -2, ...
double rgamma(double x);

struct MLQuery {
  double eta = 1.0;
  double mu = 1.0;
  double z = 0.0;  // z <= 0
};

/// Envelope in which E_{eta,mu}(z), z <= 0, is validated to 1e-10 relative.
struct MLEnvelope {
  static constexpr double eta_min = 0.1;
  static constexpr double eta_max = 1.0;
  static constexpr double mu_min = 0.05;
  static constexpr double mu_max = 30.0;
};

/// Evaluator for E_{eta,mu}(z) with z <= 0, bound to one (eta, mu) pair.
///
/// With X = |z|^{1/eta}, small X uses the power series summed in binary128
/// (the alternating terms grow like e^X before cancelling), and large X the
/// algebraic asymptotic expansion truncated at its smallest term. Both
/// coefficient tables are built once, so an instance is immutable and can be
/// shared between threads.
class MittagLeffler {
 public:
  MittagLeffler(double eta, double mu);

  double eta() const { return eta_; }
  double mu() const { return mu_; }

  double operator()(double z) const;

  /// Region that answers an evaluation at z.
  enum class Region { Exponential, Series, Asymptotic };
  Region region_for(double z) const;

  /// |z|^{1/eta} at which the evaluator switches from series to asymptotics.
  static constexpr double crossover_scale = 36.0;

  /// A region's value with its own a posteriori error bound (absolute).
  struct Estimate {
    double value;
    double error;
  };
  /// Power series alone; error is infinite when the table is exhausted.
  Estimate series(double z) const;
  /// Truncated asymptotic expansion alone.
  Estimate asymptotic(double z) const;

 private:
  double eta_;
  double mu_;
  std::vector<__float128> series_coef_;  // 1/Gamma(eta k + mu), k = 0..
  std::vector<long double> series_coef_ld_;
  std::vector<long double> asym_coef_;   // 1/Gamma(mu - eta k), k = 1..
  std::vector<long double> asym_envelope_;  // bound on |asym_coef_| without the sine
};

/// E_{eta,mu}(z) for z <= 0. Parameters outside MLEnvelope throw
/// UnsupportedRange; z > 0 or eta <= 0 throws DomainError.
double ml_eval(const MLQuery& q);

/// t^{eta-1} E_{eta,eta}(-c t^eta): the resolvent kernel of
/// d^eta y + c y = f. t <= 0 throws DomainError.
double relaxation_kernel(double eta, double c, double t);

/// Same kernel with a prebuilt E_{eta,eta} evaluator.
double relaxation_kernel(const MittagLeffler& ml_eta_eta, double c, double t);

}  // namespace fracdecay
