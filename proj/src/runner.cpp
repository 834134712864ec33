#include "fracdecay/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fracdecay/errors.hpp"
#include "fracdecay/frac_ode.hpp"

namespace fracdecay {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string> kModes = {"mlf", "ode", "pde", "oracle", "report"};
const std::vector<std::string> kProfiles = {"sin", "parabola", "tent", "zero"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// strict field readers: a wrong type records an error and leaves dst unchanged
struct Reader {
  std::vector<std::string> errors;

  void num(const ojson& j, const std::string& key, double& dst) {
    if (j.is_number()) dst = j.get<double>();
    else errors.push_back(key + ": expected a number");
  }
  void integer(const ojson& j, const std::string& key, int& dst) {
    if (j.is_number_integer()) dst = j.get<int>();
    else errors.push_back(key + ": expected an integer");
  }
  void str(const ojson& j, const std::string& key, std::string& dst) {
    if (j.is_string()) dst = j.get<std::string>();
    else errors.push_back(key + ": expected a string");
  }
  void boolean(const ojson& j, const std::string& key, bool& dst) {
    if (j.is_boolean()) dst = j.get<bool>();
    else errors.push_back(key + ": expected true or false");
  }
  void numbers(const ojson& j, const std::string& key, std::vector<double>& dst) {
    if (!j.is_array()) {
      errors.push_back(key + ": expected an array of numbers");
      return;
    }
    std::vector<double> out;
    for (const auto& e : j) {
      if (!e.is_number()) {
        errors.push_back(key + ": expected an array of numbers");
        return;
      }
      out.push_back(e.get<double>());
    }
    dst = out;
  }
  void strings(const ojson& j, const std::string& key, std::vector<std::string>& dst) {
    if (!j.is_array()) {
      errors.push_back(key + ": expected an array of strings");
      return;
    }
    std::vector<std::string> out;
    for (const auto& e : j) {
      if (!e.is_string()) {
        errors.push_back(key + ": expected an array of strings");
        return;
      }
      out.push_back(e.get<std::string>());
    }
    dst = out;
  }
  void matrix(const ojson& j, const std::string& key, std::vector<std::vector<double>>& dst) {
    if (!j.is_array()) {
      errors.push_back(key + ": expected an array of rows");
      return;
    }
    std::vector<std::vector<double>> out;
    for (const auto& row : j) {
      std::vector<double> r;
      const std::size_t before = errors.size();
      numbers(row, key, r);
      if (errors.size() != before) return;
      out.push_back(r);
    }
    dst = out;
  }
};

}  // namespace

SpaceFn initial_profile(const std::string& name) {
  if (name == "sin") return [](double x) { return std::sin(x); };
  if (name == "parabola") return [](double x) { return x * (kPi - x); };
  if (name == "tent") return [](double x) { return 0.5 * kPi - std::fabs(x - 0.5 * kPi); };
  if (name == "zero") return [](double) { return 0.0; };
  throw ConfigError("unknown initial profile \"" + name + "\" (sin, parabola, tent, zero)");
}

std::vector<std::string> case_profiles(int K, const std::string& ic_case) {
  if (K == 2) {
    if (ic_case == "i") return {"sin", "tent"};
    if (ic_case == "ii") return {"sin", "zero"};
  } else if (K == 3) {
    if (ic_case == "i") return {"parabola", "sin", "tent"};
    if (ic_case == "ii") return {"sin", "tent", "zero"};
    if (ic_case == "iii") return {"sin", "zero", "zero"};
  }
  std::ostringstream os;
  os << "initial case \"" << ic_case << "\" is not defined for K=" << K
     << (K == 2 ? " (i, ii)" : K == 3 ? " (i, ii, iii)" : "");
  throw ConfigError(os.str());
}

RunConfig resolve(RunConfig c) {
  if (c.K >= 1) {
    if (c.diffusivities.empty()) c.diffusivities.assign(c.K, 1.0);
    if (c.coupling.empty()) {
      const double off = c.K == 2 ? -1.0 : -0.5;
      c.coupling.assign(c.K, std::vector<double>(c.K, off));
      for (int k = 0; k < c.K; ++k) c.coupling[k][k] = 1.0;
    }
    if (c.initials.empty()) {
      try {
        c.initials = case_profiles(c.K, c.ic_case);
      } catch (const ConfigError&) {
        // left empty; validate reports the case
      }
    }
  }
  if (c.fit_lo == 0.0 && c.fit_hi == 0.0) {
    c.fit_lo = c.T / 5.0;
    c.fit_hi = c.T;
  }
  return c;
}

namespace {

std::vector<std::string> config_problems(const RunConfig& c) {
  std::vector<std::string> e;
  auto add = [&](const std::string& s) { e.push_back(s); };
  if (!contains(kModes, c.mode)) add("mode \"" + c.mode + "\" not one of mlf, ode, pde, oracle, report");
  if (c.K < 2 || c.K > 3) add("K=" + std::to_string(c.K) + " must be 2 or 3");
  const auto K = static_cast<std::size_t>(std::max(c.K, 0));
  if (c.orders.size() != K) add("orders needs " + std::to_string(K) + " entries");
  for (std::size_t k = 0; k < c.orders.size(); ++k) {
    if (!(c.orders[k] > 0.0 && c.orders[k] <= 1.0))
      add("orders[" + std::to_string(k) + "]=" + fmt17(c.orders[k]) + " not in (0,1]");
    if (k > 0 && c.orders[k] > c.orders[k - 1])
      add("orders must be non-increasing (orders[" + std::to_string(k) + "])");
  }
  if (!c.diffusivities.empty() && c.diffusivities.size() != K)
    add("diffusivities needs " + std::to_string(K) + " entries");
  for (std::size_t k = 0; k < c.diffusivities.size(); ++k)
    if (!(c.diffusivities[k] > 0.0)) add("diffusivities[" + std::to_string(k) + "] not positive");
  if (!c.coupling.empty()) {
    bool shape = c.coupling.size() == K;
    for (const auto& row : c.coupling) shape = shape && row.size() == K;
    if (!shape) add("coupling must be a " + std::to_string(K) + "x" + std::to_string(K) + " matrix");
    else
      for (std::size_t k = 0; k < K; ++k)
        if (!(c.coupling[k][k] >= 0.0)) add("coupling[" + std::to_string(k) + "][" + std::to_string(k) + "] negative");
  }
  if (c.initials.empty()) {
    try {
      case_profiles(c.K, c.ic_case);
    } catch (const ConfigError& err) {
      add(std::string("ic_case: ") + err.what());
    }
  } else {
    if (c.initials.size() != K) add("initials needs " + std::to_string(K) + " entries");
    for (const auto& p : c.initials)
      if (!contains(kProfiles, p)) add("initials: unknown profile \"" + p + "\"");
  }
  if (!(c.L > 0.0)) add("L not positive");
  if (c.I < 2) add("I below 2");
  if (!(c.T > 0.0)) add("T not positive");
  if (c.N < 2) add("N below 2");
  if (c.stride < 1) add("stride below 1");
  if (c.fit_samples < 10) add("fit_samples below 10");
  const bool default_window = c.fit_lo == 0.0 && c.fit_hi == 0.0;
  if (!default_window && !(c.fit_lo >= 1.0 && c.fit_hi > c.fit_lo && c.fit_hi <= c.T))
    add("fit window [" + fmt17(c.fit_lo) + ", " + fmt17(c.fit_hi) + "] needs 1 <= fit_lo < fit_hi <= T");
  if (default_window && !(c.T / 5.0 >= 1.0)) add("default fit window [T/5, T] needs T >= 5");
  return e;
}

void throw_if_any(const std::vector<std::string>& e) {
  if (e.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& s : e) msg += "\n  " + s;
  throw ConfigError(msg);
}

}  // namespace

void validate(const RunConfig& c) { throw_if_any(config_problems(c)); }

RunConfig parse_config(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const ojson::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  Reader r;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const ojson& v = it.value();
    if (k == "mode") r.str(v, k, c.mode);
    else if (k == "K") r.integer(v, k, c.K);
    else if (k == "orders") r.numbers(v, k, c.orders);
    else if (k == "diffusivities") r.numbers(v, k, c.diffusivities);
    else if (k == "coupling") r.matrix(v, k, c.coupling);
    else if (k == "ic_case") r.str(v, k, c.ic_case);
    else if (k == "initials") r.strings(v, k, c.initials);
    else if (k == "L") r.num(v, k, c.L);
    else if (k == "I") r.integer(v, k, c.I);
    else if (k == "T") r.num(v, k, c.T);
    else if (k == "N") r.integer(v, k, c.N);
    else if (k == "scheme") {
      std::string s;
      r.str(v, k, s);
      if (v.is_string()) {
        try {
          c.scheme = scheme_from_string(s);
        } catch (const ConfigError& err) {
          r.errors.push_back(err.what());
        }
      }
    } else if (k == "stride") r.integer(v, k, c.stride);
    else if (k == "fit_lo") r.num(v, k, c.fit_lo);
    else if (k == "fit_hi") r.num(v, k, c.fit_hi);
    else if (k == "fit_samples") r.integer(v, k, c.fit_samples);
    else if (k == "output") r.str(v, k, c.output);
    else if (k == "parallel") r.boolean(v, k, c.parallel);
    else r.errors.push_back("unknown key \"" + k + "\"");
  }
  auto problems = config_problems(c);
  r.errors.insert(r.errors.end(), problems.begin(), problems.end());
  throw_if_any(r.errors);
  return resolve(c);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const RunConfig& config) {
  const RunConfig c = resolve(config);
  ojson j;
  j["mode"] = c.mode;
  j["K"] = c.K;
  j["orders"] = c.orders;
  j["diffusivities"] = c.diffusivities;
  j["coupling"] = c.coupling;
  j["ic_case"] = c.ic_case;
  j["initials"] = c.initials;
  j["L"] = c.L;
  j["I"] = c.I;
  j["T"] = c.T;
  j["N"] = c.N;
  j["scheme"] = to_string(c.scheme);
  j["stride"] = c.stride;
  j["fit_lo"] = c.fit_lo;
  j["fit_hi"] = c.fit_hi;
  j["fit_samples"] = c.fit_samples;
  j["output"] = c.output;
  j["parallel"] = c.parallel;
  return j.dump(2);
}

SystemSpec make_system(const RunConfig& config) {
  const RunConfig c = resolve(config);
  SystemSpec s;
  s.K = c.K;
  s.orders = c.orders;
  s.diffusivities = c.diffusivities;
  s.coupling = c.coupling;
  for (const auto& p : c.initials) s.initials.push_back(initial_profile(p));
  return s;
}

Grid make_grid(const RunConfig& c) {
  Grid g;
  g.L = c.L;
  g.I = c.I;
  g.T = c.T;
  g.N = c.N;
  return g;
}

RunReport run(const RunConfig& config) {
  validate(config);
  RunReport r;
  r.config = resolve(config);
  r.config_snapshot = to_json(r.config);
  const SystemSpec spec = make_system(r.config);
  const Grid grid = make_grid(r.config);

  const auto t0 = std::chrono::steady_clock::now();
  SimulationOptions opt;
  opt.scheme = r.config.scheme;
  opt.parallel = r.config.parallel;
  opt.stats = &r.stats;
  const History h = simulate(spec, grid, opt);
  const auto norms = component_norms(h, grid);

  r.norms.resize(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    auto& ns = r.norms[k];
    for (int n = 1; n <= grid.N; ++n) {
      ns.times.push_back(grid.t(n));
      ns.values.push_back(norms[k][n]);
    }
    const double last = ns.values.back();
    r.final_pointwise.push_back(grid.T > 1.0 && last > 0.0
                                    ? std::log(last) / std::log(grid.T)
                                    : std::numeric_limits<double>::quiet_NaN());
  }
  const DecayWindow w{r.config.fit_lo, r.config.fit_hi};
  for (int k = 0; k < spec.K; ++k) {
    try {
      r.fits.push_back(fit_exponent_log_uniform(r.norms[k], w, r.config.fit_samples));
    } catch (const DomainError& err) {
      throw DomainError("component " + std::to_string(k + 1) + ": " + err.what());
    }
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const StabilityReport st = stability_report(spec, grid);
  r.stable = st.stable;
  r.marginal = st.marginal;
  double off = 0.0;
  for (int k = 0; k < spec.K; ++k)
    for (int l = 0; l < spec.K; ++l)
      if (k != l) off = std::max(off, std::fabs(spec.coupling[k][l]));
  const double kappa0 = *std::min_element(spec.diffusivities.begin(), spec.diffusivities.end());
  r.assumption = check_decay_assumption(kappa0, poincare_constant(grid.L), off, off);

  if (!r.config.output.empty()) write_csv(r, r.config.output);
  return r;
}

void write_csv(const RunReport& r, std::ostream& os) {
  const int K = static_cast<int>(r.norms.size());
  os << "t";
  for (int k = 1; k <= K; ++k) os << ",norm_" << k;
  for (int k = 1; k <= K; ++k) os << ",pointwise_exp_" << k;
  os << "\n";
  const int N = K ? static_cast<int>(r.norms[0].times.size()) : 0;
  const int stride = std::max(r.config.stride, 1);
  for (int n = 1; n <= N; ++n) {
    if (n % stride != 0 && n != N) continue;
    const double t = r.norms[0].times[n - 1];
    os << fmt17(t);
    for (int k = 0; k < K; ++k) os << "," << fmt17(r.norms[k].values[n - 1]);
    for (int k = 0; k < K; ++k) {
      const double v = r.norms[k].values[n - 1];
      os << "," << (t > 1.0 && v > 0.0 ? fmt17(std::log(v) / std::log(t)) : std::string("nan"));
    }
    os << "\n";
  }
}

void write_csv(const RunReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_csv(r, out);
}

std::string summary(const RunReport& r) {
  std::ostringstream os;
  const auto& c = r.config;
  os << "K=" << c.K << " orders=";
  for (std::size_t k = 0; k < c.orders.size(); ++k) os << (k ? "," : "") << c.orders[k];
  os << " initials=";
  for (std::size_t k = 0; k < c.initials.size(); ++k) os << (k ? "," : "") << c.initials[k];
  os << " scheme=" << to_string(c.scheme) << "\n";
  os << "grid: L=" << c.L << " I=" << c.I << " T=" << c.T << " N=" << c.N << " dt=" << c.T / c.N
     << " dx=" << c.L / c.I << "\n";
  os << "fit window [" << c.fit_lo << ", " << c.fit_hi << "], " << c.fit_samples
     << " log-uniform samples\n";
  char buf[160];
  for (std::size_t k = 0; k < r.fits.size(); ++k) {
    std::snprintf(buf, sizeof buf,
                  "  component %zu: exponent %+.4f (rms %.2e), ln|u|/ln t at T = %+.4f\n", k + 1,
                  r.fits[k].exponent, r.fits[k].rms_residual, r.final_pointwise[k]);
    os << buf;
  }
  os << "coupling dominance: " << (r.stable ? (r.marginal ? "marginal" : "yes") : "no")
     << "; decay assumption: " << (r.assumption ? "holds" : "fails") << "\n";
  std::snprintf(buf, sizeof buf, "wall time %.2f s, pivoted fallbacks %d, max residual %.2e\n",
                r.wall_seconds, r.stats.singular_fallbacks, r.stats.max_residual);
  os << buf;
  return os.str();
}

double conjectured_rate(const std::vector<double>& orders, const std::vector<bool>& nonzero) {
  if (orders.empty() || orders.size() != nonzero.size())
    throw DomainError("conjectured_rate: orders and initial flags must have equal nonzero length");
  double lowest = -1.0;
  for (std::size_t k = 0; k < orders.size(); ++k)
    if (nonzero[k]) lowest = lowest < 0.0 ? orders[k] : std::min(lowest, orders[k]);
  if (lowest < 0.0) throw DomainError("conjectured_rate: all initial data vanish");
  const double last = *std::min_element(orders.begin(), orders.end());
  return lowest < 1.0 ? -lowest : -(1.0 + last);
}

std::vector<Experiment> table_experiments() {
  std::vector<Experiment> v;
  const double rows[6][3] = {{1, .5, .3}, {1, .5, .5}, {1, .7, .5}, {1, 1, .3}, {1, 1, .5}, {1, 1, .7}};
  const double t1[6] = {-0.5, -0.5, -0.7, -1.3, -1.5, -1.7};
  const double t2[6] = {-1.3, -1.5, -1.5, -1.3, -1.5, -1.7};
  for (int i = 0; i < 6; ++i)
    v.push_back({"w0 = 0", 3, {rows[i][0], rows[i][1], rows[i][2]}, "ii", t1[i], 0.07});
  for (int i = 0; i < 6; ++i)
    v.push_back({"v0 = w0 = 0", 3, {rows[i][0], rows[i][1], rows[i][2]}, "iii", t2[i], 0.07});
  return v;
}

std::vector<Experiment> figure_experiments() {
  return {
      {"pair 0.9/0.5", 2, {0.9, 0.5}, "i", -0.5, 0.05},
      {"pair 0.9/0.5", 2, {0.9, 0.5}, "ii", -0.9, 0.05},
      {"pair 1/0.5", 2, {1.0, 0.5}, "i", -0.5, 0.05},
      {"pair 1/0.5", 2, {1.0, 0.5}, "ii", -1.5, 0.07},
      {"pair 1/beta, v0 = 0", 2, {1.0, 0.3}, "ii", -1.3, 0.07},
      {"pair 1/beta, v0 = 0", 2, {1.0, 0.7}, "ii", -1.7, 0.07},
      {"triple 0.9/0.5/0.3", 3, {0.9, 0.5, 0.3}, "i", -0.3, 0.05},
      {"triple 0.9/0.5/0.3", 3, {0.9, 0.5, 0.3}, "ii", -0.5, 0.05},
      {"triple 0.9/0.5/0.3", 3, {0.9, 0.5, 0.3}, "iii", -0.9, 0.05},
  };
}

std::vector<Experiment> conjecture_experiments() {
  std::vector<Experiment> v;
  const double firsts[] = {1.0, 0.9}, seconds[] = {1.0, 0.7, 0.5}, thirds[] = {0.5, 0.3};
  for (double a : firsts)
    for (double b : seconds)
      for (double g : thirds) {
        if (b > a || g > b) continue;
        for (const char* ic : {"i", "ii", "iii"}) {
          const auto prof = case_profiles(3, ic);
          std::vector<bool> nz;
          for (const auto& p : prof) nz.push_back(p != "zero");
          v.push_back({"Conjecture", 3, {a, b, g}, ic, conjectured_rate({a, b, g}, nz), 0.07});
        }
      }
  return v;
}

ExperimentRow run_experiment(const Experiment& e, const GridChoice& g) {
  ExperimentRow row;
  row.experiment = e;
  RunConfig c;
  c.K = e.K;
  c.orders = e.orders;
  c.ic_case = e.ic_case;
  c.I = g.I;
  c.N = g.N;
  c.T = g.T;
  c.parallel = g.parallel;
  try {
    const RunReport r = run(c);
    row.wall_seconds = r.wall_seconds;
    row.pass = true;
    for (const auto& f : r.fits) {
      row.exponents.push_back(f.exponent);
      row.pass = row.pass && std::fabs(f.exponent - e.expected) <= e.tolerance;
    }
  } catch (const std::exception& err) {
    row.error = err.what();
    row.pass = false;
  }
  return row;
}

std::vector<ExperimentRow> run_experiments(const std::vector<Experiment>& list, const GridChoice& g) {
  // rows run one after another; the kernels inside each run use the threads
  std::vector<ExperimentRow> rows;
  for (const auto& e : list) rows.push_back(run_experiment(e, g));
  return rows;
}

std::string format_rows(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  char buf[200];
  std::string group;
  for (const auto& r : rows) {
    const auto& e = r.experiment;
    if (e.group != group) {
      group = e.group;
      os << group << "\n";
      os << "  orders          case  expected   fitted (per component)          result\n";
    }
    std::string ord;
    for (std::size_t k = 0; k < e.orders.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s%.1f", k ? " " : "", e.orders[k]);
      ord += buf;
    }
    std::string fits;
    for (double x : r.exponents) {
      std::snprintf(buf, sizeof buf, " %+.3f", x);
      fits += buf;
    }
    if (!r.error.empty()) fits = " error: " + r.error;
    std::snprintf(buf, sizeof buf, "  %-15s %-5s t^%+.1f %s%-32s %s (+-%.2f)\n", ord.c_str(),
                  e.ic_case.c_str(), e.expected, "", fits.c_str(), r.pass ? "pass" : "FAIL",
                  e.tolerance);
    os << buf;
  }
  return os.str();
}

}  // namespace fracdecay
