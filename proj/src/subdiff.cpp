#include "fracdecay/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracdecay/decay.hpp"
#include "fracdecay/errors.hpp"
#include "fracdecay/kernels.hpp"
#include "fracdecay/special.hpp"

namespace fracdecay {

void validate(const SystemSpec& spec, const Grid& grid) {
  std::ostringstream os;
  const int K = spec.K;
  if (K < 1) os << " K=" << K << " must be at least 1;";
  if (static_cast<int>(spec.orders.size()) != K)
    os << " orders has " << spec.orders.size() << " entries, expected " << K << ";";
  if (static_cast<int>(spec.diffusivities.size()) != K)
    os << " diffusivities has " << spec.diffusivities.size() << " entries, expected " << K << ";";
  if (static_cast<int>(spec.initials.size()) != K)
    os << " initials has " << spec.initials.size() << " entries, expected " << K << ";";
  if (!spec.sources.empty() && static_cast<int>(spec.sources.size()) != K)
    os << " sources has " << spec.sources.size() << " entries, expected 0 or " << K << ";";
  if (!spec.coupling_fn) {
    bool shape = static_cast<int>(spec.coupling.size()) == K;
    for (const auto& row : spec.coupling) shape = shape && static_cast<int>(row.size()) == K;
    if (!shape) os << " coupling must be a " << K << "x" << K << " matrix;";
  }
  for (std::size_t k = 0; k < spec.orders.size(); ++k) {
    const double a = spec.orders[k];
    if (!(a > 0.0 && a <= 1.0)) os << " orders[" << k << "]=" << a << " not in (0,1];";
    if (k > 0 && a > spec.orders[k - 1])
      os << " orders[" << k << "]=" << a << " exceeds orders[" << k - 1 << "];";
  }
  for (std::size_t k = 0; k < spec.diffusivities.size(); ++k)
    if (!(spec.diffusivities[k] > 0.0))
      os << " diffusivities[" << k << "]=" << spec.diffusivities[k] << " not positive;";
  if (!spec.coupling_fn && static_cast<int>(spec.coupling.size()) == K)
    for (int k = 0; k < K; ++k)
      if (static_cast<int>(spec.coupling[k].size()) == K && !(spec.coupling[k][k] >= 0.0))
        os << " coupling[" << k << "][" << k << "]=" << spec.coupling[k][k] << " negative;";
  if (!(grid.L > 0.0)) os << " L=" << grid.L << " not positive;";
  if (!(grid.T > 0.0)) os << " T=" << grid.T << " not positive;";
  if (grid.I < 2) os << " I=" << grid.I << " below 2;";
  if (grid.N < 2) os << " N=" << grid.N << " below 2;";
  if (!os.str().empty()) throw ConfigError("invalid system:" + os.str());
}

History::History(int levels, int K, int nodes)
    : levels_(levels), K_(K), nodes_(nodes),
      data_(static_cast<std::size_t>(levels) * K * nodes, 0.0) {}

std::vector<double> l1_weights(double gamma, int n) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    std::ostringstream os;
    os << "l1_weights: order " << gamma << " not in (0,1]";
    throw DomainError(os.str());
  }
  std::vector<double> b(static_cast<std::size_t>(std::max(n, 0)) + 1);
  const double e = 1.0 - gamma;
  b[0] = 1.0;
  double prev = 0.0;  // j^{1-gamma}, carried so each power is computed once
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double next = std::pow(static_cast<double>(j + 1), e);
    b[j] = gamma == 1.0 ? (j == 0 ? 1.0 : 0.0) : next - prev;
    prev = next;
  }
  return b;
}

double l1_ratio(double order, double diffusivity, const Grid& grid) {
  return diffusivity * gamma_fn(2.0 - order) * std::pow(grid.dt(), order) /
         (grid.dx() * grid.dx());
}

std::string to_string(Scheme s) {
  return s == Scheme::SemiImplicit ? "semi-implicit" : "fully-implicit";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "semi-implicit") return Scheme::SemiImplicit;
  if (s == "fully-implicit") return Scheme::FullyImplicit;
  throw ConfigError("scheme must be \"semi-implicit\" or \"fully-implicit\", got \"" + s + "\"");
}

BandedMatrix assemble_block_matrix(const SystemSpec& spec, const Grid& grid, int n) {
  const int K = spec.K, m = grid.I - 1;
  const double t = grid.t(n), dx2 = grid.dx() * grid.dx();
  std::vector<double> r(K), g(K);
  for (int k = 0; k < K; ++k) {
    r[k] = l1_ratio(spec.orders[k], spec.diffusivities[k], grid);
    g[k] = dx2 * r[k] / spec.diffusivities[k];
  }
  BandedMatrix A(static_cast<std::size_t>(m) * K, K, K);
  for (int i = 1; i <= grid.I - 1; ++i) {
    const double x = grid.x(i);
    for (int k = 0; k < K; ++k) {
      const std::size_t row = static_cast<std::size_t>(i - 1) * K + k;
      for (int l = 0; l < K; ++l) {
        const std::size_t col = static_cast<std::size_t>(i - 1) * K + l;
        A.at(row, col) = l == k ? 1.0 + 2.0 * r[k] + g[k] * spec.c(k, k, x, t)
                                : g[k] * spec.c(k, l, x, t);
      }
      if (i > 1) A.at(row, row - K) = -r[k];
      if (i < grid.I - 1) A.at(row, row + K) = -r[k];
    }
  }
  return A;
}

StabilityReport stability_report(const SystemSpec& spec, const Grid& grid) {
  StabilityReport rep;
  auto check_at = [&](double x, double t) {
    for (int k = 0; k < spec.K; ++k) {
      double off = 0.0;
      for (int l = 0; l < spec.K; ++l)
        if (l != k) off += std::fabs(spec.c(k, l, x, t));
      const double diag = spec.c(k, k, x, t);
      if (diag < off) rep.stable = false;
      if (diag == off) rep.marginal = true;
    }
  };
  if (!spec.coupling_fn) {
    check_at(0.0, 0.0);
  } else {
    for (int n = 0; n <= grid.N; ++n)
      for (int i = 1; i < grid.I; ++i) check_at(grid.x(i), grid.t(n));
  }
  return rep;
}

bool stability_condition(const SystemSpec& spec, const Grid& grid) {
  return stability_report(spec, grid).stable;
}

double gershgorin_margin(const BandedMatrix& A) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& d : gershgorin_disks(A)) m = std::min(m, std::fabs(d.center) - d.radius);
  return m;
}

L1Stepper::L1Stepper(const SystemSpec& spec, const Grid& grid, bool parallel)
    : spec_(spec), grid_(grid), parallel_(parallel) {
  validate(spec, grid);
  const double dx2 = grid.dx() * grid.dx();
  for (int k = 0; k < spec.K; ++k) {
    b_.push_back(l1_weights(spec.orders[k], grid.N));
    r_.push_back(l1_ratio(spec.orders[k], spec.diffusivities[k], grid));
    g_.push_back(dx2 * r_.back() / spec.diffusivities[k]);
  }
  coef_.resize(static_cast<std::size_t>(grid.N) + 1);
  hist_.resize(static_cast<std::size_t>(grid.I) + 1);
}

void L1Stepper::history_term(const History& h, int n, int k, double* out) {
  const int m = grid_.I - 1;
  const double* base = h.profile(0, k) + 1;  // interior node 1 of level 0
  const std::size_t stride = h.level_stride();
  if (spec_.orders[k] == 1.0) {
    // weights degenerate to backward Euler: only u^n survives
    std::copy(base + n * stride, base + n * stride + m, out);
    return;
  }
  const std::vector<double>& b = b_[k];
  coef_[0] = b[n];
  for (int j = 1; j <= n; ++j) coef_[j] = b[n - j] - b[n - j + 1];
  if (parallel_)
    kernels::history_sum_omp(coef_.data(), n + 1, base, stride, m, out);
  else
    kernels::history_sum_serial(coef_.data(), n + 1, base, stride, m, out);
}

void L1Stepper::step_semi_implicit(History& h, int n) {
  const int K = spec_.K, I = grid_.I, m = I - 1;
  const double t = grid_.t(n);
  std::vector<std::vector<double>> next(K, std::vector<double>(m));
  for (int k = 0; k < K; ++k) {
    history_term(h, n, k, hist_.data());
    std::vector<double> rhs(m);
    for (int i = 1; i < I; ++i) {
      const double x = grid_.x(i);
      double lower = spec_.source(k, x, t);
      for (int l = 0; l < K; ++l) lower -= spec_.c(k, l, x, t) * h.at(n, l, i);
      rhs[i - 1] = hist_[i - 1] + g_[k] * lower;
    }
    BandedMatrix A(m, 1, 1);
    for (int i = 0; i < m; ++i) {
      A.at(i, i) = 1.0 + 2.0 * r_[k];
      if (i > 0) A.at(i, i - 1) = -r_[k];
      if (i + 1 < m) A.at(i, i + 1) = -r_[k];
    }
    BandedSolution s = banded_solve(A, rhs);
    stats_.max_residual = std::max(stats_.max_residual, s.relative_residual);
    next[k] = std::move(s.x);
  }
  for (int k = 0; k < K; ++k) {
    h.at(n + 1, k, 0) = 0.0;
    h.at(n + 1, k, I) = 0.0;
    for (int i = 1; i < I; ++i) h.at(n + 1, k, i) = next[k][i - 1];
  }
}

void L1Stepper::step_fully_implicit(History& h, int n) {
  const int K = spec_.K, I = grid_.I, m = I - 1;
  const double t = grid_.t(n + 1);
  std::vector<double> rhs(static_cast<std::size_t>(m) * K);
  for (int k = 0; k < K; ++k) {
    history_term(h, n, k, hist_.data());
    for (int i = 1; i < I; ++i)
      rhs[static_cast<std::size_t>(i - 1) * K + k] =
          hist_[i - 1] + g_[k] * spec_.source(k, grid_.x(i), t);
  }
  const BandedMatrix A = assemble_block_matrix(spec_, grid_, n + 1);
  BandedSolution s;
  try {
    s = banded_solve(A, rhs);
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "fully implicit step into level " << n + 1 << ": " << e.what();
    throw NumericalError(os.str());
  }
  if (s.method == BandedMethod::PivotedLU) ++stats_.singular_fallbacks;
  stats_.max_residual = std::max(stats_.max_residual, s.relative_residual);
  for (int k = 0; k < K; ++k) {
    h.at(n + 1, k, 0) = 0.0;
    h.at(n + 1, k, I) = 0.0;
    for (int i = 1; i < I; ++i) h.at(n + 1, k, i) = s.x[static_cast<std::size_t>(i - 1) * K + k];
  }
}

void step_semi_implicit(const SystemSpec& spec, const Grid& grid, History& h, int n) {
  L1Stepper(spec, grid).step_semi_implicit(h, n);
}

void step_fully_implicit(const SystemSpec& spec, const Grid& grid, History& h, int n) {
  L1Stepper(spec, grid).step_fully_implicit(h, n);
}

History simulate(const SystemSpec& spec, const Grid& grid, const SimulationOptions& opt) {
  validate(spec, grid);
  History h(grid.N + 1, spec.K, grid.I + 1);
  for (int k = 0; k < spec.K; ++k)
    for (int i = 1; i < grid.I; ++i) h.at(0, k, i) = spec.initials[k](grid.x(i));
  L1Stepper stepper(spec, grid, opt.parallel);
  for (int n = 0; n < grid.N; ++n) {
    if (opt.scheme == Scheme::SemiImplicit)
      stepper.step_semi_implicit(h, n);
    else
      stepper.step_fully_implicit(h, n);
  }
  if (opt.stats) *opt.stats = stepper.stats();
  return h;
}

std::vector<std::vector<double>> component_norms(const History& h, const Grid& grid) {
  std::vector<std::vector<double>> out(h.K(), std::vector<double>(h.levels()));
  for (int n = 0; n < h.levels(); ++n)
    for (int k = 0; k < h.K(); ++k)
      out[k][n] = l2_norm(h.profile(n, k), static_cast<std::size_t>(h.nodes()), grid.dx());
  return out;
}

}  // namespace fracdecay
