#include "fracdecay/decay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdecay/errors.hpp"

namespace fracdecay {

namespace {

void check_lengths(const NormSeries& s, const char* who) {
  if (s.times.size() != s.values.size()) {
    std::ostringstream os;
    os << who << ": " << s.times.size() << " times but " << s.values.size() << " values";
    throw DomainError(os.str());
  }
  for (std::size_t i = 1; i < s.times.size(); ++i)
    if (!(s.times[i] > s.times[i - 1])) {
      std::ostringstream os;
      os << who << ": times not strictly increasing at index " << i;
      throw DomainError(os.str());
    }
}

void check_window(const DecayWindow& w, const char* who) {
  if (!(w.t_lo >= 1.0 && w.t_hi > w.t_lo)) {
    std::ostringstream os;
    os << who << ": window [" << w.t_lo << ", " << w.t_hi << "] needs 1 <= t_lo < t_hi";
    throw DomainError(os.str());
  }
}

}  // namespace

NormSeries pointwise_exponent(const NormSeries& s) {
  check_lengths(s, "pointwise_exponent");
  NormSeries out;
  out.times = s.times;
  out.values.resize(s.times.size());
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (!(s.times[i] > 1.0) || !(s.values[i] > 0.0)) {
      std::ostringstream os;
      os << "pointwise_exponent: needs t > 1 and value > 0, got t = " << s.times[i]
         << ", value = " << s.values[i];
      throw DomainError(os.str());
    }
    out.values[i] = std::log(s.values[i]) / std::log(s.times[i]);
  }
  return out;
}

DecayFit fit_exponent(const NormSeries& s, const DecayWindow& w) {
  check_lengths(s, "fit_exponent");
  check_window(w, "fit_exponent");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double t = s.times[i];
    if (t < w.t_lo || t > w.t_hi) continue;
    if (!(s.values[i] > 0.0)) {
      std::ostringstream os;
      os << "fit_exponent: zero series value " << s.values[i] << " at t = " << t
         << "; a power law cannot be fitted";
      throw DomainError(os.str());
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(s.values[i]));
  }
  if (xs.size() < 10) {
    std::ostringstream os;
    os << "fit_exponent: " << xs.size() << " samples in [" << w.t_lo << ", " << w.t_hi
       << "], at least 10 required";
    throw DomainError(os.str());
  }
  // centered sums keep the normal equations well conditioned
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  DecayFit fit;
  fit.window = w;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.samples = static_cast<int>(xs.size());
  return fit;
}

NormSeries log_uniform_resample(const NormSeries& s, const DecayWindow& w, int count) {
  check_lengths(s, "log_uniform_resample");
  check_window(w, "log_uniform_resample");
  if (count < 2) throw DomainError("log_uniform_resample: count must be at least 2");
  if (s.times.empty() || w.t_lo < s.times.front() || w.t_hi > s.times.back()) {
    std::ostringstream os;
    os << "log_uniform_resample: window [" << w.t_lo << ", " << w.t_hi
       << "] exceeds the series range";
    throw DomainError(os.str());
  }
  NormSeries out;
  const double l0 = std::log(w.t_lo), l1 = std::log(w.t_hi);
  std::size_t j = 0;
  for (int m = 0; m < count; ++m) {
    const double t = m == count - 1 ? w.t_hi : std::exp(l0 + (l1 - l0) * m / (count - 1));
    while (j + 1 < s.times.size() && s.times[j + 1] < t) ++j;
    const std::size_t k = std::min(j + 1, s.times.size() - 1);
    const double ta = s.times[j], tb = s.times[k], va = s.values[j], vb = s.values[k];
    if (!(va > 0.0) || !(vb > 0.0)) {
      std::ostringstream os;
      os << "log_uniform_resample: zero series value near t = " << t
         << "; a power law cannot be fitted";
      throw DomainError(os.str());
    }
    double v = va;
    if (k != j && tb > ta) {
      const double f = (std::log(t) - std::log(ta)) / (std::log(tb) - std::log(ta));
      v = std::exp(std::log(va) + f * (std::log(vb) - std::log(va)));
    }
    out.times.push_back(t);
    out.values.push_back(v);
  }
  return out;
}

DecayFit fit_exponent_log_uniform(const NormSeries& s, const DecayWindow& w, int count) {
  return fit_exponent(log_uniform_resample(s, w, count), w);
}

double l2_norm(const double* profile, std::size_t nodes, double dx) {
  if (nodes < 2) return 0.0;
  double s = 0.5 * (profile[0] * profile[0] + profile[nodes - 1] * profile[nodes - 1]);
  for (std::size_t i = 1; i + 1 < nodes; ++i) s += profile[i] * profile[i];
  return std::sqrt(s * dx);
}

double l2_norm(const std::vector<double>& profile, double dx) {
  return l2_norm(profile.data(), profile.size(), dx);
}

}  // namespace fracdecay
