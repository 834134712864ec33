// Command-line front end: mlf, ode, pde, oracle, report, decay.
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracdecay/decay.hpp"
#include "fracdecay/errors.hpp"
#include "fracdecay/frac_ode.hpp"
#include "fracdecay/runner.hpp"
#include "fracdecay/special.hpp"
#include "fracdecay/spectral.hpp"

using namespace fracdecay;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> log_times(double lo, double hi, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i)
    t[i] = i == count - 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return t;
}

// stdout unless a path is given
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ConfigError("cannot write " + path);
    os = &file;
  }
  std::ostream& operator*() { return *os; }
};

struct MlfArgs {
  double eta = 1.0, mu = 1.0;
  std::vector<double> z;
};

int cmd_mlf(const MlfArgs& a) {
  const MittagLeffler ml(a.eta, a.mu);
  std::cout << "z,value,region\n";
  for (double z : a.z) {
    MLQuery q{a.eta, a.mu, z};
    const double v = ml_eval(q);
    const auto reg = ml.region_for(z);
    const char* name = reg == MittagLeffler::Region::Series       ? "series"
                       : reg == MittagLeffler::Region::Asymptotic ? "asymptotic"
                                                                   : "exponential";
    std::cout << g17(z) << "," << g17(v) << "," << name << "\n";
  }
  return 0;
}

struct OdeArgs {
  double alpha = 0.9, beta = 0.5, c1 = 2.0, c2 = 1.0, t_max = 20.0;
  std::string method = "picard";
  int n_steps = 4096, points = 64, stride = 16;
  std::string output;
};

int cmd_ode(const OdeArgs& a) {
  Sink out(a.output);
  NormSeries sum;
  if (a.method == "picard") {
    OdeSpec s;
    s.alpha = a.alpha;
    s.beta = a.beta;
    s.a = 1.0;
    s.eta1 = s.eta2 = a.c1;
    s.mu1 = s.mu2 = a.c2;
    const OdePath p = picard_solve(s, a.t_max, a.n_steps);
    if (!p.converged)
      throw NumericalError("picard_solve: no convergence after " + std::to_string(p.iterations) +
                           " sweeps, last update " + g17(p.last_update));
    *out << "t,U,V\n";
    for (std::size_t i = 0; i < p.times.size(); ++i) {
      if (i % a.stride != 0 && i + 1 != p.times.size()) continue;
      *out << g17(p.times[i]) << "," << g17(p.U[i]) << "," << g17(p.V[i]) << "\n";
    }
    for (std::size_t i = 1; i < p.times.size(); ++i) {
      sum.times.push_back(p.times[i]);
      sum.values.push_back(p.U[i] + p.V[i]);
    }
    std::cerr << "picard: " << p.iterations << " sweeps\n";
  } else if (a.method == "laplace") {
    const LaplaceSymbol sym{a.alpha, a.beta, a.c1, a.c2};
    if (!(a.t_max > 1.0)) throw DomainError("--t-max must exceed 1 for the laplace method");
    const auto times = log_times(1.0, a.t_max, a.points);
    const auto res = branch_cut_invert(sym, times);
    *out << "t,U,V\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      *out << g17(times[i]) << "," << g17(res[i].U) << "," << g17(res[i].V) << "\n";
      sum.times.push_back(times[i]);
      sum.values.push_back(res[i].U + res[i].V);
    }
    std::cerr << "laplace: " << (res.empty() ? 0 : res[0].poles) << " poles\n";
  } else {
    throw ConfigError("--method must be picard or laplace");
  }
  // slope over the last two decades when the run reaches them
  if (a.t_max >= 100.0) {
    const DecayWindow w{a.t_max / 100.0, a.t_max};
    const DecayFit f = fit_exponent_log_uniform(sum, w, 64);
    std::cerr << "slope of ln(U+V) on [" << w.t_lo << ", " << w.t_hi << "]: " << f.exponent << "\n";
  }
  return 0;
}

int cmd_pde(const std::string& config, const std::string& output, bool print_config) {
  RunConfig c = load_config(config);
  if (!output.empty()) c.output = output;
  const RunReport r = run(c);
  std::cout << summary(r);
  if (print_config) std::cout << r.config_snapshot << "\n";
  return 0;
}

struct OracleArgs {
  double beta = 0.5, t_max = 1000.0, t_min = 10.0;
  int modes = 64, points = 32;
  std::string profile = "sin", output;
};

int cmd_oracle(const OracleArgs& a) {
  Sink out(a.output);
  const auto c = project_initial(initial_profile(a.profile), a.modes);
  *out << "t,v_norm_exact,v_norm_asymptotic,ratio\n";
  for (double t : log_times(a.t_min, a.t_max, a.points)) {
    const double ex = coefficient_norm(decoupled_solve(c, a.beta, t, a.modes).v_coeffs);
    const double as = coefficient_norm(asymptotic_v(c, a.beta, t));
    *out << g17(t) << "," << g17(ex) << "," << g17(as) << "," << g17(ex / as) << "\n";
  }
  return 0;
}

struct ReportArgs {
  bool tables = false, figures = false, conjecture = false;
  GridChoice grid;
};

int cmd_report(const ReportArgs& a) {
  if (!a.tables && !a.figures && !a.conjecture)
    throw ConfigError("report needs --tables, --figures or --conjecture");
  std::vector<ExperimentRow> rows;
  auto add = [&](const std::vector<Experiment>& list) {
    auto r = run_experiments(list, a.grid);
    rows.insert(rows.end(), r.begin(), r.end());
  };
  if (a.figures) add(figure_experiments());
  if (a.tables) add(table_experiments());
  if (a.conjecture) add(conjecture_experiments());
  std::cout << "grid: I=" << a.grid.I << " N=" << a.grid.N << " T=" << a.grid.T
            << ", fit window [T/5, T]\n";
  std::cout << format_rows(rows);
  int failed = 0;
  for (const auto& r : rows) failed += !r.pass;
  std::cout << rows.size() - failed << "/" << rows.size() << " rows within tolerance\n";
  return 0;
}

struct DecayArgs {
  std::string input, column;
  double t_lo = 0.0, t_hi = 0.0;
  int samples = 64;
  bool series = true;
};

int cmd_decay(const DecayArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw ConfigError("cannot read " + a.input);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(a.input + " is empty");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  if (names.size() < 2) throw ConfigError(a.input + ": need a t column and at least one value column");
  std::vector<std::vector<double>> cols(names.size());
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',') && k < names.size()) {
      try {
        cols[k].push_back(std::stod(cell));
      } catch (const std::exception&) {
        cols[k].push_back(std::nan(""));
      }
      ++k;
    }
    if (k != names.size())
      throw ConfigError(a.input + ": row " + std::to_string(row) + " has " + std::to_string(k) +
                        " cells, expected " + std::to_string(names.size()));
  }
  std::vector<std::size_t> pick;
  for (std::size_t k = 1; k < names.size(); ++k) {
    if (!a.column.empty() ? names[k] == a.column : names[k].rfind("pointwise", 0) != 0)
      pick.push_back(k);
  }
  if (pick.empty()) throw ConfigError("no column named \"" + a.column + "\"");
  const double T = cols[0].back();
  DecayWindow w{a.t_lo, a.t_hi};
  if (w.t_lo == 0.0 && w.t_hi == 0.0) w = {T / 5.0, T};
  std::vector<NormSeries> series;
  for (std::size_t k : pick) {
    NormSeries s{cols[0], cols[k]};
    const DecayFit f = fit_exponent_log_uniform(s, w, a.samples);
    std::printf("%s: exponent %+.6f on [%g, %g], intercept %.6f, rms %.3e\n", names[k].c_str(),
                f.exponent, w.t_lo, w.t_hi, f.intercept, f.rms_residual);
    series.push_back(s);
  }
  if (a.series) {
    std::cout << "t";
    for (std::size_t k : pick) std::cout << ",ratio_" << names[k];
    std::cout << "\n";
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
      const double t = cols[0][i];
      if (!(t > 1.0)) continue;
      std::cout << g17(t);
      for (std::size_t k : pick) {
        const double v = cols[k][i];
        std::cout << "," << (v > 0.0 ? g17(std::log(v) / std::log(t)) : std::string("nan"));
      }
      std::cout << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-time decay of coupled subdiffusion systems"};
  app.require_subcommand(1);

  MlfArgs mlf;
  auto* s_mlf = app.add_subcommand("mlf", "Mittag-Leffler E_{eta,mu}(z) for z <= 0");
  s_mlf->add_option("--eta", mlf.eta, "first parameter")->required();
  s_mlf->add_option("--mu", mlf.mu, "second parameter")->required();
  s_mlf->add_option("--z", mlf.z, "arguments (repeatable)")->required();

  OdeArgs ode;
  auto* s_ode = app.add_subcommand("ode", "coupled fractional ODE with U(0)=1, V(0)=0");
  s_ode->add_option("--alpha", ode.alpha)->required();
  s_ode->add_option("--beta", ode.beta)->required();
  s_ode->add_option("--c1", ode.c1)->required();
  s_ode->add_option("--c2", ode.c2)->required();
  s_ode->add_option("--t-max", ode.t_max)->required();
  s_ode->add_option("--method", ode.method, "picard or laplace")->capture_default_str();
  s_ode->add_option("--n-steps", ode.n_steps, "picard grid steps")->capture_default_str();
  s_ode->add_option("--stride", ode.stride, "picard rows per printed row")->capture_default_str();
  s_ode->add_option("--points", ode.points, "laplace log-spaced times")->capture_default_str();
  s_ode->add_option("--output", ode.output, "CSV path (default stdout)");

  std::string pde_config, pde_output;
  bool pde_print = false;
  auto* s_pde = app.add_subcommand("pde", "run a subdiffusion system from a JSON config");
  s_pde->add_option("--config", pde_config)->required()->check(CLI::ExistingFile);
  s_pde->add_option("--output", pde_output, "CSV path, overrides the config");
  s_pde->add_flag("--print-config", pde_print, "echo the resolved config");

  OracleArgs orc;
  auto* s_orc = app.add_subcommand("oracle", "eigenmode solution of the decoupled pair");
  s_orc->add_option("--beta", orc.beta)->required();
  s_orc->add_option("--t-max", orc.t_max)->required();
  s_orc->add_option("--t-min", orc.t_min)->capture_default_str();
  s_orc->add_option("--modes", orc.modes)->capture_default_str();
  s_orc->add_option("--points", orc.points)->capture_default_str();
  s_orc->add_option("--profile", orc.profile, "sin, parabola, tent")->capture_default_str();
  s_orc->add_option("--output", orc.output, "CSV path (default stdout)");

  ReportArgs rep;
  auto* s_rep = app.add_subcommand("report", "decay-rate tables, figure cases, conjecture grid");
  s_rep->add_flag("--tables", rep.tables);
  s_rep->add_flag("--figures", rep.figures);
  s_rep->add_flag("--conjecture", rep.conjecture);
  s_rep->add_option("--I", rep.grid.I)->capture_default_str();
  s_rep->add_option("--N", rep.grid.N)->capture_default_str();
  s_rep->add_option("--T", rep.grid.T)->capture_default_str();
  s_rep->add_flag("!--serial", rep.grid.parallel, "serial reference kernels");

  DecayArgs dec;
  auto* s_dec = app.add_subcommand("decay", "fit decay exponents to a norm-series CSV");
  s_dec->add_option("--input", dec.input)->required()->check(CLI::ExistingFile);
  s_dec->add_option("--column", dec.column, "value column (default: all norm columns)");
  s_dec->add_option("--t-lo", dec.t_lo, "window start (default T/5)");
  s_dec->add_option("--t-hi", dec.t_hi, "window end (default T)");
  s_dec->add_option("--samples", dec.samples)->capture_default_str();
  s_dec->add_flag("!--no-series", dec.series, "skip the pointwise ratio series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*s_mlf) return cmd_mlf(mlf);
    if (*s_ode) return cmd_ode(ode);
    if (*s_pde) return cmd_pde(pde_config, pde_output, pde_print);
    if (*s_orc) return cmd_oracle(orc);
    if (*s_rep) return cmd_report(rep);
    if (*s_dec) return cmd_decay(dec);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
