#pragma once

// Experiment orchestration: config -> simulate -> norms -> decay fits.

#include <iosfwd>
#include <string>
#include <vector>

#include "fracdecay/decay.hpp"
#include "fracdecay/subdiff.hpp"

namespace fracdecay {

/// Named initial profiles on (0, pi).
SpaceFn initial_profile(const std::string& name);  // sin | parabola | tent | zero
/// Profile names of the standard cases: K = 2 "i", "ii"; K = 3 "i", "ii", "iii".
std::vector<std::string> case_profiles(int K, const std::string& ic_case);

struct RunConfig {
  std::string mode = "pde";  // mlf | ode | pde | oracle | report
  int K = 2;
  std::vector<double> orders = {0.9, 0.5};
  std::vector<double> diffusivities;            // empty: all 1
  std::vector<std::vector<double>> coupling;    // empty: diagonal 1, off-diagonal -1 (K=2) or -0.5 (K=3)
  std::string ic_case = "i";
  std::vector<std::string> initials;            // empty: profiles of ic_case
  double L = 3.141592653589793;
  int I = 128;
  double T = 1000.0;
  int N = 4000;
  Scheme scheme = Scheme::FullyImplicit;
  int stride = 10;
  double fit_lo = 0.0, fit_hi = 0.0;            // 0: window [T/5, T]
  int fit_samples = 64;
  std::string output;                           // CSV path, empty for none
  bool parallel = true;
};

/// Fills every defaulted field; the result serializes with no implicit values.
RunConfig resolve(RunConfig c);
/// Throws ConfigError listing every violated field.
void validate(const RunConfig& c);

/// Strict JSON: unknown keys and wrong types are errors (ConfigError).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
/// Resolved config as JSON; parse_config(to_json(c)) serializes back identically.
std::string to_json(const RunConfig& c);

SystemSpec make_system(const RunConfig& c);
Grid make_grid(const RunConfig& c);

struct RunReport {
  RunConfig config;             // resolved
  std::string config_snapshot;  // to_json(config)
  std::vector<NormSeries> norms;  // per component, levels 1..N
  std::vector<DecayFit> fits;
  std::vector<double> final_pointwise;  // ln norm / ln T per component
  bool stable = false;      // diagonal dominance of the couplings
  bool marginal = false;
  bool assumption = false;  // kappa0 / C^2 > max off-diagonal |c|
  double wall_seconds = 0.0;
  StepStats stats;
};

/// Runs the pipeline and writes the CSV when config.output is set.
/// Zero norms inside the window propagate as DomainError ("zero series").
RunReport run(const RunConfig& config);

/// Header t, norm_1..K, pointwise_exp_1..K; every stride-th level plus the last.
void write_csv(const RunReport& r, std::ostream& os);
void write_csv(const RunReport& r, const std::string& path);
std::string summary(const RunReport& r);

/// Lowest order with nonzero initial data if below 1, else 1 + lowest order.
double conjectured_rate(const std::vector<double>& orders, const std::vector<bool>& nonzero_initial);

struct Experiment {
  std::string group;  // e.g. "v0 = w0 = 0"
  int K = 3;
  std::vector<double> orders;
  std::string ic_case;
  double expected = 0.0;  // decay exponent, negative
  double tolerance = 0.07;
};

struct ExperimentRow {
  Experiment experiment;
  std::vector<double> exponents;  // per component
  double wall_seconds = 0.0;
  bool pass = false;  // every component within tolerance
  std::string error;  // set when the run failed
};

struct GridChoice {
  int I = 128;
  int N = 4000;
  double T = 1000.0;
  bool parallel = true;
};

std::vector<Experiment> table_experiments();   // K = 3 with w0 = 0, then v0 = w0 = 0; 12 rows
std::vector<Experiment> figure_experiments();  // two- and three-component cases, 9 rows
/// K = 3 order triples under every case, expected = conjectured_rate.
std::vector<Experiment> conjecture_experiments();

ExperimentRow run_experiment(const Experiment& e, const GridChoice& g = {});
std::vector<ExperimentRow> run_experiments(const std::vector<Experiment>& list,
                                           const GridChoice& g = {});
/// Aligned text table with one pass/fail entry per row.
std::string format_rows(const std::vector<ExperimentRow>& rows);

}  // namespace fracdecay
