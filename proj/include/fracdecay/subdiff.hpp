#pragma once

// L1 finite differences for the K-component weakly coupled system
//   d^{alpha_k}(u_k - u0_k) - d_k u_k'' + sum_l c_kl(x, t) u_l = F_k(x, t)
// on (0, L) with homogeneous Dirichlet data.

#include <functional>
#include <string>
#include <vector>

#include "fracdecay/banded.hpp"

namespace fracdecay {

struct Grid {
  double L = 3.141592653589793;
  int I = 128;  // space cells
  double T = 1.0;
  int N = 100;  // time steps

  double dx() const { return L / I; }
  double dt() const { return T / N; }
  double x(int i) const { return i == I ? L : i * dx(); }
  double t(int n) const { return n == N ? T : n * dt(); }
};

using SpaceTimeFn = std::function<double(double x, double t)>;
using SpaceFn = std::function<double(double x)>;
/// c_kl(x, t) for a general coupling; k, l are component indices.
using CouplingFn = std::function<double(int k, int l, double x, double t)>;

struct SystemSpec {
  int K = 2;
  std::vector<double> orders;        // non-increasing, in (0, 1]
  std::vector<double> diffusivities;  // > 0
  std::vector<std::vector<double>> coupling;  // constant K x K matrix
  CouplingFn coupling_fn;  // when set, replaces the constant matrix
  std::vector<SpaceTimeFn> sources;  // empty or K entries (empty entries mean zero)
  std::vector<SpaceFn> initials;     // K entries

  double c(int k, int l, double x, double t) const {
    return coupling_fn ? coupling_fn(k, l, x, t) : coupling[k][l];
  }
  double source(int k, double x, double t) const {
    return (k < static_cast<int>(sources.size()) && sources[k]) ? sources[k](x, t) : 0.0;
  }
};

/// Throws ConfigError listing every violated field.
void validate(const SystemSpec& spec, const Grid& grid);

/// Full space-time solution, indexed (level n, component k, node i).
class History {
 public:
  History() = default;
  History(int levels, int K, int nodes);

  int levels() const { return levels_; }
  int K() const { return K_; }
  int nodes() const { return nodes_; }
  double& at(int n, int k, int i) { return data_[(static_cast<std::size_t>(n) * K_ + k) * nodes_ + i]; }
  double at(int n, int k, int i) const {
    return data_[(static_cast<std::size_t>(n) * K_ + k) * nodes_ + i];
  }
  double* level(int n) { return data_.data() + static_cast<std::size_t>(n) * K_ * nodes_; }
  const double* level(int n) const {
    return data_.data() + static_cast<std::size_t>(n) * K_ * nodes_;
  }
  const double* profile(int n, int k) const { return level(n) + static_cast<std::size_t>(k) * nodes_; }
  /// Distance between the same (k, i) entry on consecutive levels.
  std::size_t level_stride() const { return static_cast<std::size_t>(K_) * nodes_; }

 private:
  int levels_ = 0, K_ = 0, nodes_ = 0;
  std::vector<double> data_;
};

/// b^j = (j+1)^{1-gamma} - j^{1-gamma}, j = 0..n.
std::vector<double> l1_weights(double gamma, int n);

/// d_k Gamma(2 - alpha_k) dt^{alpha_k} / dx^2.
double l1_ratio(double order, double diffusivity, const Grid& grid);

enum class Scheme { SemiImplicit, FullyImplicit };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);  // "semi-implicit" | "fully-implicit"

/// Matrix of the fully implicit step into level n (couplings at t_n), on the
/// interior unknowns ordered by node: index (i - 1) K + k.
BandedMatrix assemble_block_matrix(const SystemSpec& spec, const Grid& grid, int n);

struct StabilityReport {
  bool stable = true;    // c_kk >= sum_{l != k} |c_kl| at every sampled point
  bool marginal = false; // equality reached somewhere
};
StabilityReport stability_report(const SystemSpec& spec, const Grid& grid);
bool stability_condition(const SystemSpec& spec, const Grid& grid);

/// min over rows of |center| - radius.
double gershgorin_margin(const BandedMatrix& A);

struct StepStats {
  int singular_fallbacks = 0;  // steps that needed the pivoted solver
  double max_residual = 0.0;
};

/// Steps the scheme level by level, caching weights and ratios.
class L1Stepper {
 public:
  L1Stepper(const SystemSpec& spec, const Grid& grid, bool parallel = true);

  /// Level n + 1 from levels 0..n with couplings and sources lagged to t_n.
  void step_semi_implicit(History& h, int n);
  /// Level n + 1 with couplings and sources at t_{n+1}, one banded solve.
  void step_fully_implicit(History& h, int n);

  const StepStats& stats() const { return stats_; }

 private:
  // b^n u^0 + sum_j (b^{n-j} - b^{n-j+1}) u^j for component k, interior nodes
  void history_term(const History& h, int n, int k, double* out);

  const SystemSpec& spec_;
  Grid grid_;
  bool parallel_;
  std::vector<std::vector<double>> b_;  // per component, j = 0..N
  std::vector<double> r_, g_;           // r_k and dx^2 r_k / d_k
  std::vector<double> coef_, hist_;
  StepStats stats_;
};

/// Free-function forms; each builds a stepper, so prefer L1Stepper in loops.
void step_semi_implicit(const SystemSpec& spec, const Grid& grid, History& h, int n);
void step_fully_implicit(const SystemSpec& spec, const Grid& grid, History& h, int n);

struct SimulationOptions {
  Scheme scheme = Scheme::FullyImplicit;
  bool parallel = true;
  StepStats* stats = nullptr;  // filled when set
};

/// Level 0 from the initial data, then N steps.
History simulate(const SystemSpec& spec, const Grid& grid, const SimulationOptions& opt = {});

/// Per-level L2 norms of each component: norms[k][n].
std::vector<std::vector<double>> component_norms(const History& h, const Grid& grid);

}  // namespace fracdecay
