#include "fracdecay/frac_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracdecay/errors.hpp"
#include "fracdecay/kernels.hpp"
#include "fracdecay/quadrature.hpp"
#include "fracdecay/special.hpp"

namespace fracdecay {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void validate(const OdeSpec& s, double T, int n_steps, const PicardOptions& opt) {
  std::ostringstream os;
  if (!(s.alpha > 0.0 && s.alpha <= 1.0)) os << " alpha=" << s.alpha << " not in (0,1];";
  if (!(s.beta > 0.0 && s.beta <= s.alpha)) os << " beta=" << s.beta << " not in (0,alpha];";
  if (!(s.eta1 >= 0.0)) os << " eta1=" << s.eta1 << " negative;";
  if (!(s.eta2 >= 0.0)) os << " eta2=" << s.eta2 << " negative;";
  if (!(T > 0.0)) os << " T=" << T << " not positive;";
  if (n_steps < 16) os << " n_steps=" << n_steps << " below 16;";
  if (!(opt.tol > 0.0)) os << " tol=" << opt.tol << " not positive;";
  if (opt.max_iter < 1) os << " max_iter=" << opt.max_iter << " below 1;";
  if (!os.str().empty()) throw DomainError("picard_solve:" + os.str());
}

// principal-branch power with 0^g = 0 for g > 0
cplx cpow(cplx s, double g) {
  const double m = std::abs(s);
  if (m == 0.0) return {0.0, 0.0};
  return std::polar(std::pow(m, g), g * std::arg(s));
}

void convolve(const ConvolutionWeights& w, const std::vector<double>& v, std::vector<double>& out,
              bool parallel) {
  const std::size_t n = v.size() - 1;
  out.resize(v.size());
  if (parallel)
    kernels::convolve_omp(w.w0.data(), w.w1.data(), v.data(), n, out.data());
  else
    kernels::convolve_serial(w.w0.data(), w.w1.data(), v.data(), n, out.data());
}

double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(x[i] - y[i]));
  return d;
}

void validate_symbol(const LaplaceSymbol& sym, const char* who) {
  std::ostringstream os;
  if (!(sym.c1 > sym.c2 && sym.c2 > 0.0))
    os << " requires c1 > c2 > 0, got c1=" << sym.c1 << " c2=" << sym.c2 << ";";
  if (!(sym.alpha > 0.0 && sym.alpha <= 1.0 && sym.beta > 0.0 && sym.beta <= 1.0))
    os << " orders must lie in (0,1], got alpha=" << sym.alpha << " beta=" << sym.beta << ";";
  if (sym.alpha == 1.0 && sym.beta == 1.0)
    os << " alpha = beta = 1 has its poles on the cut; at least one order must be below 1;";
  if (!os.str().empty()) throw DomainError(std::string(who) + ":" + os.str());
}

}  // namespace

ConvolutionWeights convolution_weights(double eta, double c, double dt, int n) {
  if (!(eta > 0.0 && eta <= 1.0) || !(c >= 0.0) || !(dt > 0.0) || n < 1) {
    std::ostringstream os;
    os << "convolution_weights: invalid eta=" << eta << " c=" << c << " dt=" << dt << " n=" << n;
    throw DomainError(os.str());
  }
  ConvolutionWeights w;
  w.dt = dt;
  w.w0.resize(n);
  w.w1.resize(n);
  const MittagLeffler ml(eta, eta);
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : failed)
  for (int j = 0; j < n; ++j) {
    const double lo = j * dt, hi = (j + 1) * dt;
    auto k = [&](double tau) { return relaxation_kernel(ml, c, tau); };
    auto k1 = [&](double tau) { return relaxation_kernel(ml, c, tau) * (tau - lo) / dt; };
    QuadResult r0, r1;
    if (j == 0 && eta < 1.0) {
      r0 = integrate_left_power(k, lo, hi, eta, opt);
      r1 = integrate_left_power(k1, lo, hi, eta, opt);
    } else {
      r0 = integrate(k, lo, hi, opt);
      r1 = integrate(k1, lo, hi, opt);
    }
    failed = failed || !r0.converged || !r1.converged;
    w.w0[j] = r0.value;
    w.w1[j] = r1.value;
  }
  if (failed) {
    std::ostringstream os;
    os << "convolution_weights: moment quadrature did not converge (eta=" << eta << ", c=" << c
       << ", dt=" << dt << ")";
    throw NumericalError(os.str());
  }
  return w;
}

OdePath picard_solve(const OdeSpec& spec, double T, int n_steps, const PicardOptions& opt) {
  validate(spec, T, n_steps, opt);
  const double dt = T / n_steps;
  const std::size_t np = static_cast<std::size_t>(n_steps) + 1;

  OdePath path;
  path.times.resize(np);
  for (std::size_t i = 0; i < np; ++i) path.times[i] = static_cast<double>(i) * dt;
  path.times.back() = T;

  const ConvolutionWeights wa = convolution_weights(spec.alpha, spec.eta1, dt, n_steps);
  const ConvolutionWeights wb = convolution_weights(spec.beta, spec.eta2, dt, n_steps);

  // base terms: relaxation of the initial values plus the source convolutions
  std::vector<double> U1(np), V1(np), tmp;
  const MittagLeffler ea(spec.alpha, 1.0), eb(spec.beta, 1.0);
  for (std::size_t i = 0; i < np; ++i) {
    const double t = path.times[i];
    U1[i] = spec.a * ea(-spec.eta1 * std::pow(t, spec.alpha));
    V1[i] = spec.b * eb(-spec.eta2 * std::pow(t, spec.beta));
  }
  auto add_source = [&](const std::function<double(double)>& f, const ConvolutionWeights& w,
                        std::vector<double>& base) {
    if (!f) return;
    std::vector<double> fs(np);
    for (std::size_t i = 0; i < np; ++i) fs[i] = f(path.times[i]);
    convolve(w, fs, tmp, opt.parallel);
    for (std::size_t i = 0; i < np; ++i) base[i] += tmp[i];
  };
  add_source(spec.F, wa, U1);
  add_source(spec.G, wb, V1);

  std::vector<double> U(np, 0.0), V(np, 0.0), Un(np), Vn(np), cu, cv;
  if (opt.keep_iterates) {
    path.U_iterates.push_back(U);
    path.V_iterates.push_back(V);
  }
  for (int m = 1; m <= opt.max_iter; ++m) {
    convolve(wa, V, cu, opt.parallel);
    convolve(wb, U, cv, opt.parallel);
    for (std::size_t i = 0; i < np; ++i) {
      Un[i] = U1[i] + spec.mu1 * cu[i];
      Vn[i] = V1[i] + spec.mu2 * cv[i];
    }
    const double d = std::max(sup_diff(Un, U), sup_diff(Vn, V));
    U.swap(Un);
    V.swap(Vn);
    if (opt.keep_iterates) {
      path.U_iterates.push_back(U);
      path.V_iterates.push_back(V);
    }
    path.iterations = m;
    path.last_update = d;
    if (d < opt.tol) {
      path.converged = true;
      break;
    }
  }
  path.U = std::move(U);
  path.V = std::move(V);
  return path;
}

bool picard_monotonicity(const OdePath& path) {
  auto check = [](const std::vector<std::vector<double>>& it) {
    for (std::size_t m = 1; m < it.size(); ++m) {
      double scale = 0.0;
      for (double x : it[m]) scale = std::max(scale, std::fabs(x));
      const double slack = 1e-14 * scale;
      for (std::size_t i = 0; i < it[m].size(); ++i)
        if (it[m][i] < it[m - 1][i] - slack) return false;
    }
    return true;
  };
  return check(path.U_iterates) && check(path.V_iterates);
}

std::complex<double> q_of_r(const LaplaceSymbol& sym, double r) {
  const double a = sym.alpha, b = sym.beta, c1 = sym.c1, c2 = sym.c2;
  const double ra = std::pow(r, a), rb = std::pow(r, b), rab = ra * rb;
  const double re = (c1 * c1 - c2 * c2) + c1 * (ra * std::cos(a * kPi) + rb * std::cos(b * kPi)) +
                    rab * std::cos((a + b) * kPi);
  const double im =
      c1 * (ra * std::sin(a * kPi) + rb * std::sin(b * kPi)) + rab * std::sin((a + b) * kPi);
  return {re, im};
}

ImParts im_parts(const LaplaceSymbol& sym, double r) {
  const double a = sym.alpha, b = sym.beta, c1 = sym.c1, c2 = sym.c2;
  const double d = c1 * c1 - c2 * c2;
  const double rb = std::pow(r, b), ra = std::pow(r, a);
  const double sa = std::sin(a * kPi), sb = std::sin(b * kPi);
  const double smin = std::sin((a - b) * kPi), splus = std::sin((a + b) * kPi);
  ImParts p;
  p.im_eq = d * sa + c1 * rb * smin - ra * rb * sb;
  p.im_pq = c1 * d * sa + (c1 * c1 * smin + d * splus) * rb + c1 * sa * rb * rb;
  return p;
}

std::complex<double> symbol_denominator(const LaplaceSymbol& sym, std::complex<double> s) {
  return (cpow(s, sym.alpha) + sym.c1) * (cpow(s, sym.beta) + sym.c1) - sym.c2 * sym.c2;
}

std::complex<double> symbol_denominator_prime(const LaplaceSymbol& sym, std::complex<double> s) {
  return sym.alpha * cpow(s, sym.alpha - 1.0) * (cpow(s, sym.beta) + sym.c1) +
         sym.beta * cpow(s, sym.beta - 1.0) * (cpow(s, sym.alpha) + sym.c1);
}

namespace {

// phase change of D along the segment z0 -> z1, refined until every step is small
double phase_change(const LaplaceSymbol& sym, cplx z0, cplx z1, cplx d0, cplx d1, int depth) {
  const double step = std::arg(d1 / d0);
  if (std::fabs(step) < kPi / 4 || depth > 40) return step;
  const cplx zm = 0.5 * (z0 + z1);
  const cplx dm = symbol_denominator(sym, zm);
  return phase_change(sym, z0, zm, d0, dm, depth + 1) + phase_change(sym, zm, z1, dm, d1, depth + 1);
}

double edge_phase(const LaplaceSymbol& sym, cplx a, cplx b, int samples) {
  double total = 0.0;
  cplx zp = a, dp = symbol_denominator(sym, a);
  for (int k = 1; k <= samples; ++k) {
    const double s = static_cast<double>(k) / samples;
    // keep an exact +0 imaginary part on the real axis (upper lip of the cut)
    cplx z(a.real() + s * (b.real() - a.real()), a.imag() + s * (b.imag() - a.imag()));
    if (a.imag() == 0.0 && b.imag() == 0.0) z = cplx(z.real(), 0.0);
    const cplx d = symbol_denominator(sym, z);
    total += phase_change(sym, zp, z, dp, d, 0);
    zp = z;
    dp = d;
  }
  return total;
}

struct Rect {
  double x0, x1, y0, y1;
};

cplx newton(const LaplaceSymbol& sym, cplx z, bool& ok) {
  ok = false;
  for (int it = 0; it < 100; ++it) {
    const cplx d = symbol_denominator(sym, z), dp = symbol_denominator_prime(sym, z);
    if (dp == 0.0) return z;
    const cplx step = d / dp;
    z -= step;
    if (z.imag() < 0.0) z = std::conj(z);  // stay on the searched sheet half
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
      ok = true;
      return z;
    }
  }
  return z;
}

void search(const LaplaceSymbol& sym, const Rect& r, int count, int depth,
            std::vector<cplx>& found) {
  if (count == 0) return;
  const double w = r.x1 - r.x0, h = r.y1 - r.y0;
  if (depth >= 2 && count == 1) {
    bool ok = false;
    const cplx z = newton(sym, cplx(r.x0 + 0.5 * w, r.y0 + 0.5 * h), ok);
    const double mx = 0.05 * w, my = 0.05 * h;
    if (ok && z.real() >= r.x0 - mx && z.real() <= r.x1 + mx && z.imag() >= r.y0 - my &&
        z.imag() <= r.y1 + my) {
      found.push_back(z);
      return;
    }
  }
  if (depth > 24) {
    std::ostringstream os;
    os << "find_poles: could not isolate " << count << " zero(s) near (" << r.x0 << ", " << r.y0
       << ")";
    throw NumericalError(os.str());
  }
  const double xm = r.x0 + 0.5 * w, ym = r.y0 + 0.5 * h;
  const Rect kids[4] = {
      {r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym}, {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
  int counts[4], sum = 0;
  for (int samples : {64, 256}) {
    sum = 0;
    for (int k = 0; k < 4; ++k) {
      counts[k] = count_zeros(sym, kids[k].x0, kids[k].x1, kids[k].y0, kids[k].y1, samples);
      sum += counts[k];
    }
    if (sum == count) break;
  }
  if (sum != count) {
    std::ostringstream os;
    os << "find_poles: zero counts of sub-rectangles (" << sum << ") disagree with parent ("
       << count << ") near (" << r.x0 << ", " << r.y0 << ")";
    throw NumericalError(os.str());
  }
  for (int k = 0; k < 4; ++k) search(sym, kids[k], counts[k], depth + 1, found);
}

}  // namespace

int count_zeros(const LaplaceSymbol& sym, double x0, double x1, double y0, double y1,
                int min_samples) {
  const cplx p00(x0, y0), p10(x1, y0), p11(x1, y1), p01(x0, y1);
  const double total = edge_phase(sym, p00, p10, min_samples) +
                       edge_phase(sym, p10, p11, min_samples) +
                       edge_phase(sym, p11, p01, min_samples) + edge_phase(sym, p01, p00, min_samples);
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double default_pole_radius(const LaplaceSymbol& sym) {
  return 4.0 * std::pow(std::max(sym.c1, sym.c2), 1.0 / std::min(sym.alpha, sym.beta));
}

std::vector<std::complex<double>> find_poles(const LaplaceSymbol& sym, double search_radius) {
  validate_symbol(sym, "find_poles");
  if (!(search_radius > 0.0)) throw DomainError("find_poles: search radius must be positive");
  // Upper half of the box; the bottom edge runs along the upper lip of the
  // cut for Re s < 0 and along the positive axis, where D > c1^2 - c2^2 > 0.
  const Rect box{-search_radius, search_radius, 0.0, search_radius};
  const int total = count_zeros(sym, box.x0, box.x1, box.y0, box.y1, 128);
  std::vector<cplx> upper;
  search(sym, box, total, 0, upper);

  std::vector<cplx> poles;
  for (const cplx& z : upper) {
    if (!(z.real() < 0.0) || !(z.imag() != 0.0)) {
      std::ostringstream os;
      os << "find_poles: zero at (" << z.real() << ", " << z.imag()
         << ") lacks a negative real part and nonzero imaginary part";
      throw NumericalError(os.str());
    }
    poles.push_back(z);
    poles.push_back(std::conj(z));
  }
  std::sort(poles.begin(), poles.end(), [](const cplx& x, const cplx& y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  return poles;
}

std::vector<InversionResult> branch_cut_invert(const LaplaceSymbol& sym,
                                               const std::vector<double>& times) {
  validate_symbol(sym, "branch_cut_invert");
  for (double t : times)
    if (!(t >= 1.0)) {
      std::ostringstream os;
      os << "branch_cut_invert: t = " << t << " < 1 is outside the validated range; use picard_solve";
      throw UnsupportedRange(os.str());
    }
  const std::vector<cplx> poles = find_poles(sym, default_pole_radius(sym));

  const double a = sym.alpha;
  // r^{alpha-1} Im(...) / |q|^2, the densities of the two cut integrals
  auto gU = [&](double r) {
    const double q2 = std::norm(q_of_r(sym, r));
    return std::pow(r, a - 1.0) * im_parts(sym, r).im_pq / q2;
  };
  auto gV = [&](double r) {
    const double q2 = std::norm(q_of_r(sym, r));
    return sym.c2 * std::pow(r, a - 1.0) * im_parts(sym, r).im_eq / q2;
  };
  const double p = a < 1.0 ? a : sym.beta;
  QuadOptions opt;
  opt.rel_tol = 1e-12;

  std::vector<InversionResult> out;
  out.reserve(times.size());
  for (double t : times) {
    InversionResult res;
    res.poles = static_cast<int>(poles.size());
    cplx su = 0.0, sv = 0.0;
    for (const cplx& z : poles) {
      const cplx e = std::exp(z * t) / symbol_denominator_prime(sym, z);
      const cplx za1 = cpow(z, a - 1.0);
      su += za1 * (cpow(z, sym.beta) + sym.c1) * e;
      sv += sym.c2 * za1 * e;
    }
    res.U_residue = su.real();
    res.V_residue = sv.real();

    // x = r t puts the decay into e^{-x}
    double err = 0.0;
    bool ok = true;
    auto cut = [&](const std::function<double(double)>& g) {
      auto f = [&](double x) { return x == 0.0 ? 0.0 : std::exp(-x) * g(x / t); };
      const QuadResult near = integrate_left_power(f, 0.0, 1.0, p, opt);
      const QuadResult far = integrate_to_infinity(f, 1.0, opt);
      err += (near.error + far.error) / (kPi * t);
      ok = ok && near.converged && far.converged;
      return (near.value + far.value) / (kPi * t);
    };
    res.U_branch = cut(gU);
    res.V_branch = cut(gV);
    res.quad_error = err;
    if (!ok) {
      std::ostringstream os;
      os << "branch_cut_invert: cut integral did not converge at t = " << t
         << " (error estimate " << err << ", U branch " << res.U_branch << ", V branch "
         << res.V_branch << ")";
      throw NumericalError(os.str());
    }
    res.U = res.U_residue + res.U_branch;
    res.V = res.V_residue + res.V_branch;
    out.push_back(res);
  }
  return out;
}

InversionResult branch_cut_invert(const LaplaceSymbol& sym, double t) {
  return branch_cut_invert(sym, std::vector<double>{t}).front();
}

bool check_decay_assumption(double kappa0, double C_Omega, double c12_sup, double c21_sup) {
  return kappa0 / (C_Omega * C_Omega) > std::max(c12_sup, c21_sup);
}

double poincare_constant(double L) { return L / kPi; }

}  // namespace fracdecay
