#include <cmath>
#include <cstring>
#include <numbers>

#include <doctest.h>

#include "fracdecay/decay.hpp"
#include "fracdecay/errors.hpp"
#include "fracdecay/special.hpp"
#include "fracdecay/subdiff.hpp"
#include "oracles.hpp"

using namespace fracdecay;

namespace {
constexpr double kPi = std::numbers::pi;

double sine(double x) { return std::sin(x); }
double tent(double x) { return kPi / 2.0 - std::fabs(x - kPi / 2.0); }

SystemSpec pair_spec(double a, double b) {
  SystemSpec s;
  s.K = 2;
  s.orders = {a, b};
  s.diffusivities = {1.0, 1.0};
  s.coupling = {{1.0, -1.0}, {-1.0, 1.0}};
  s.initials = {sine, tent};
  return s;
}

double level_distance(const History& a, const History& b, const Grid& g, int n) {
  double s = 0.0;
  for (int k = 0; k < a.K(); ++k) {
    std::vector<double> e(a.nodes());
    for (int i = 0; i < a.nodes(); ++i) e[i] = a.at(n, k, i) - b.at(n, k, i);
    s += std::pow(l2_norm(e, g.dx()), 2);
  }
  return std::sqrt(s);
}

// u = (1 + t^2) sin x solves d^a(u - u0) - u'' = F
double manufactured_error(double alpha, int I, int N) {
  SystemSpec s;
  s.K = 1;
  s.orders = {alpha};
  s.diffusivities = {1.0};
  s.coupling = {{0.0}};
  const double ga = oracle::gamma(3.0 - alpha);
  s.sources = {[=](double x, double t) { return std::sin(x) * (2.0 * std::pow(t, 2.0 - alpha) / ga + 1.0 + t * t); }};
  s.initials = {sine};
  const Grid g{kPi, I, 1.0, N};
  const auto h = simulate(s, g);
  std::vector<double> e(I + 1);
  for (int i = 0; i <= I; ++i) e[i] = h.at(N, 0, i) - 2.0 * std::sin(g.x(i));
  return l2_norm(e, g.dx());
}
}  // namespace

TEST_SUITE("subdiff") {

TEST_CASE("L1 weights") {
  const auto w = l1_weights(0.5, 3);
  CHECK(w[0] == 1.0);
  CHECK(std::fabs(w[1] - (std::sqrt(2.0) - 1.0)) < 1e-16);
  for (double g : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    const int n = 10000;
    const auto b = l1_weights(g, n);
    REQUIRE(b.size() == static_cast<std::size_t>(n + 1));
    CHECK(b[0] == 1.0);
    long double sum = 0.0L;
    bool decreasing = true, positive = true;
    for (int j = 0; j <= n; ++j) {
      sum += b[j];
      if (j > 0 && !(b[j] < b[j - 1])) decreasing = false;
      if (!(b[j] > 0.0)) positive = false;
      if (j % 997 == 0) CHECK(std::fabs(static_cast<double>(sum) - std::pow(j + 1.0, 1.0 - g)) <= 1e-13 * std::pow(j + 1.0, 1.0 - g));
    }
    if (g < 1.0) {
      CHECK(decreasing);
      CHECK(positive);
    } else {
      for (int j = 1; j <= n; ++j) REQUIRE(b[j] == 0.0);
    }
  }
}

TEST_CASE("hand-expanded block matrix, K = 2, I = 3") {
  SystemSpec s;
  s.K = 2;
  s.orders = {1.0, 0.5};
  s.diffusivities = {1.0, 2.0};
  s.coupling = {{2.0, -1.0}, {-0.5, 1.0}};
  s.initials = {sine, sine};
  const Grid g{3.0, 3, 1.0, 4};  // dx = 1, dt = 1/4
  // r0 = dt = 1/4, r1 = 2 Gamma(3/2) dt^{1/2} = sqrt(pi)/2; g_k = r_k / d_k
  const double r0 = 0.25, r1 = std::sqrt(kPi) / 2.0, g0 = r0, g1 = r1 / 2.0;
  const double expect[4][4] = {
      {1.0 + 2.0 * r0 + 2.0 * g0, -g0, -r0, 0.0},
      {-0.5 * g1, 1.0 + 2.0 * r1 + g1, 0.0, -r1},
      {-r0, 0.0, 1.0 + 2.0 * r0 + 2.0 * g0, -g0},
      {0.0, -r1, -0.5 * g1, 1.0 + 2.0 * r1 + g1},
  };
  const auto A = assemble_block_matrix(s, g, 1).dense();
  REQUIRE(A.size() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(A[i][j] - expect[i][j]) <= 1e-15);
  CHECK(std::fabs(l1_ratio(0.5, 2.0, g) - r1) < 1e-15);
}

TEST_CASE("K = 1 gives the classical tridiagonal matrix") {
  SystemSpec s;
  s.K = 1;
  s.orders = {0.7};
  s.diffusivities = {1.5};
  s.coupling = {{0.0}};
  s.initials = {sine};
  const Grid g{kPi, 6, 1.0, 10};
  const double r = l1_ratio(0.7, 1.5, g);
  const auto A = assemble_block_matrix(s, g, 3).dense();
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j) {
      const double e = i == j ? 1.0 + 2.0 * r : (i + 1 == j || j + 1 == i) ? -r : 0.0;
      CHECK(A[i][j] == e);
    }
}

TEST_CASE("stability condition examples") {
  const Grid g{kPi, 16, 1.0, 10};
  auto s2 = pair_spec(0.9, 0.5);
  const auto rep = stability_report(s2, g);
  CHECK(rep.stable);
  CHECK(rep.marginal);
  SystemSpec s3;
  s3.K = 3;
  s3.orders = {0.9, 0.5, 0.3};
  s3.diffusivities = {1.0, 1.0, 1.0};
  s3.coupling = {{1.0, -0.5, -0.5}, {-0.5, 1.0, -0.5}, {-0.5, -0.5, 1.0}};
  s3.initials = {sine, tent, sine};
  CHECK(stability_condition(s3, g));
  auto bad = pair_spec(0.9, 0.5);
  bad.coupling = {{0.0, 1.0}, {0.0, 1.0}};
  CHECK_FALSE(stability_condition(bad, g));
  // time-dependent coupling that loses dominance late
  auto late = pair_spec(0.9, 0.5);
  late.coupling_fn = [](int k, int l, double, double t) { return k == l ? 1.0 : (t > 0.5 ? -2.0 : -0.5); };
  CHECK_FALSE(stability_condition(late, g));
}

TEST_CASE("Gershgorin margin at least 1 under the stability condition") {
  for (double dt_scale : {0.01, 1.0, 10.0}) {
    SystemSpec s3;
    s3.K = 3;
    s3.orders = {1.0, 0.6, 0.3};
    s3.diffusivities = {1.0, 0.5, 2.0};
    s3.coupling = {{1.0, -0.5, -0.5}, {0.25, 2.0, -1.0}, {-0.5, -0.5, 3.0}};
    s3.initials = {sine, tent, sine};
    const Grid g{kPi, 16, 10.0 * dt_scale, 10};
    REQUIRE(stability_condition(s3, g));
    const auto A = assemble_block_matrix(s3, g, 5);
    CHECK(gershgorin_margin(A) >= 1.0 - 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + 2.0 * 200.0));
    // interior row of the first block
    const auto d = gershgorin_disks(A);
    const double r = l1_ratio(1.0, 1.0, g), gg = g.dx() * g.dx() * r;
    const auto& row = d[static_cast<std::size_t>(4) * 3];  // node 5, component 0
    CHECK(std::fabs(row.center - (1.0 + 2.0 * r + gg)) <= 1e-13 * row.center);
    CHECK(std::fabs(row.radius - (2.0 * r + gg * 1.0)) <= 1e-13 * row.center);
  }
}

TEST_CASE("boundary and initial level") {
  const Grid g{kPi, 32, 2.0, 40};
  const auto s = pair_spec(0.9, 0.5);
  const auto h = simulate(s, g);
  for (int i = 0; i <= g.I; ++i) {
    CHECK(h.at(0, 0, i) == sine(g.x(i)) * (i > 0 && i < g.I));
    CHECK(h.at(0, 1, i) == tent(g.x(i)) * (i > 0 && i < g.I));
  }
  for (int n = 0; n <= g.N; ++n)
    for (int k = 0; k < 2; ++k) {
      REQUIRE(h.at(n, k, 0) == 0.0);
      REQUIRE(h.at(n, k, g.I) == 0.0);
    }
}

TEST_CASE("zero data gives a zero history") {
  auto s = pair_spec(0.8, 0.4);
  s.initials = {[](double) { return 0.0; }, [](double) { return 0.0; }};
  const Grid g{kPi, 16, 1.0, 20};
  for (Scheme sc : {Scheme::SemiImplicit, Scheme::FullyImplicit}) {
    const auto h = simulate(s, g, {sc});
    for (int n = 0; n <= g.N; ++n)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i <= g.I; ++i) REQUIRE(h.at(n, k, i) == 0.0);
  }
}

TEST_CASE("schemes coincide without coupling") {
  auto s = pair_spec(0.7, 0.4);
  s.coupling = {{0.0, 0.0}, {0.0, 0.0}};
  s.sources = {[](double x, double) { return std::sin(2.0 * x); }, nullptr};
  const Grid g{kPi, 24, 1.0, 30};
  const auto a = simulate(s, g, {Scheme::SemiImplicit});
  const auto b = simulate(s, g, {Scheme::FullyImplicit});
  double worst = 0.0;
  for (int n = 0; n <= g.N; ++n)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i <= g.I; ++i) worst = std::max(worst, std::fabs(a.at(n, k, i) - b.at(n, k, i)));
  CHECK(worst <= 1e-14);
}

TEST_CASE("semi- and fully implicit agree at first order") {
  const auto s = pair_spec(0.9, 0.5);
  double prev = 0.0;
  for (int N : {20, 40, 80}) {
    const Grid g{kPi, 32, 1.0, N};
    const double d = level_distance(simulate(s, g, {Scheme::SemiImplicit}), simulate(s, g, {Scheme::FullyImplicit}), g, N);
    if (prev > 0.0) {
      const double order = std::log2(prev / d);
      CHECK(order > 0.85);
      CHECK(order < 1.3);
    }
    prev = d;
  }
}

TEST_CASE("backward Euler when alpha = 1") {
  SystemSpec s;
  s.K = 1;
  s.orders = {1.0};
  s.diffusivities = {1.0};
  s.coupling = {{0.0}};
  s.initials = {tent};
  const Grid g{kPi, 20, 1.0, 10};
  const auto h = simulate(s, g);
  const double r = g.dt() / (g.dx() * g.dx());
  const int m = g.I - 1;
  for (int n = 0; n < g.N; ++n) {
    // own Thomas sweep of (1 + 2r) u_i - r u_{i-1} - r u_{i+1} = u^n_i
    std::vector<double> c(m), d(m), u(m);
    for (int i = 0; i < m; ++i) {
      const double denom = (1.0 + 2.0 * r) - (i ? -r * c[i - 1] : 0.0);
      c[i] = -r / denom;
      d[i] = (h.at(n, 0, i + 1) - (i ? -r * d[i - 1] : 0.0)) / denom;
    }
    for (int i = m; i-- > 0;) u[i] = d[i] - (i + 1 < m ? c[i] * u[i + 1] : 0.0);
    for (int i = 0; i < m; ++i) CHECK(std::fabs(h.at(n + 1, 0, i + 1) - u[i]) <= 1e-14);
  }
}

TEST_CASE("heat equation closed form, semi-implicit") {
  SystemSpec s;
  s.K = 1;
  s.orders = {1.0};
  s.diffusivities = {1.0};
  s.coupling = {{0.0}};
  s.initials = {sine};
  const double exact = std::exp(-1.0) * std::sqrt(kPi / 2.0);
  double prev = 0.0;
  for (int f : {1, 2, 4}) {
    // dt and dx^2 refined together
    const Grid g{kPi, 16 * f, 1.0, 20 * f * f};
    const auto h = simulate(s, g, {Scheme::SemiImplicit});
    const double e = std::fabs(component_norms(h, g)[0][g.N] - exact);
    if (prev > 0.0) CHECK(std::log2(prev / e) > 1.8);
    prev = e;
  }
}

TEST_CASE("Mittag-Leffler mode, semi-implicit") {
  SystemSpec s;
  s.K = 1;
  s.orders = {0.5};
  s.diffusivities = {1.0};
  s.coupling = {{0.0}};
  s.initials = {sine};
  const double exact = oracle::ml_one_integral(0.5, 1.0) * std::sqrt(kPi / 2.0);
  double prev = 0.0;
  for (int N : {40, 80, 160}) {
    const Grid g{kPi, 256, 1.0, N};
    const auto h = simulate(s, g, {Scheme::SemiImplicit});
    const double e = std::fabs(component_norms(h, g)[0][g.N] - exact);
    if (prev > 0.0) CHECK(std::log2(prev / e) > 0.9);
    prev = e;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("manufactured solution: temporal order 2 - alpha") {
  for (double alpha : {0.5, 0.9}) {
    const double e1 = manufactured_error(alpha, 512, 32), e2 = manufactured_error(alpha, 512, 64);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 2.0 - alpha - 0.15);
    CHECK(order <= 2.0 - alpha + 0.15);
  }
}

TEST_CASE("manufactured solution: spatial order 2") {
  const double e1 = manufactured_error(0.5, 4, 2000), e2 = manufactured_error(0.5, 8, 2000);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("three components: residual") {
  SystemSpec s;
  s.K = 3;
  s.orders = {0.9, 0.5, 0.3};
  s.diffusivities = {1.0, 1.0, 1.0};
  s.coupling = {{1.0, -0.5, -0.5}, {-0.5, 1.0, -0.5}, {-0.5, -0.5, 1.0}};
  s.initials = {sine, tent, [](double) { return 0.0; }};
  const Grid g{kPi, 32, 10.0, 40};
  StepStats st;
  SimulationOptions opt;
  opt.stats = &st;
  simulate(s, g, opt);
  CHECK(st.max_residual <= 1e-10);
  CHECK(st.singular_fallbacks == 0);
  CHECK(assemble_block_matrix(s, g, 1).dense().size() == 93);
}

TEST_CASE("serial and parallel simulations are bitwise equal") {
  const auto s = pair_spec(0.9, 0.5);
  const Grid g{kPi, 64, 5.0, 60};
  for (Scheme sc : {Scheme::SemiImplicit, Scheme::FullyImplicit}) {
    SimulationOptions a, b;
    a.scheme = b.scheme = sc;
    a.parallel = false;
    const auto ha = simulate(s, g, a), hb = simulate(s, g, b);
    CHECK(std::memcmp(ha.level(0), hb.level(0), sizeof(double) * ha.level_stride() * ha.levels()) == 0);
  }
}

TEST_CASE("validation lists every problem") {
  SystemSpec s = pair_spec(0.5, 0.9);  // increasing orders
  s.diffusivities = {1.0, -1.0};
  s.coupling = {{-1.0, 0.0}, {0.0, 1.0}};
  const Grid g{kPi, 1, 1.0, 10};
  try {
    validate(s, g);
    FAIL("no error");
  } catch (const ConfigError& e) {
    const std::string w = e.what();
    CHECK(w.find("orders") != std::string::npos);
    CHECK(w.find("diffusivities") != std::string::npos);
    CHECK(w.find("coupling") != std::string::npos);
    CHECK(w.find("I") != std::string::npos);
  }
}

}  // TEST_SUITE
