// Serial reference kernels against their OpenMP versions, plus whole solves.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fracdecay/frac_ode.hpp"
#include "fracdecay/kernels.hpp"
#include "fracdecay/subdiff.hpp"

using namespace fracdecay;

namespace {

std::vector<double> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w0 = noise(n, 1), w1 = noise(n, 2), v = noise(n + 1, 3);
  std::vector<double> out(n + 1);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::convolve_omp(w0.data(), w1.data(), v.data(), n, out.data());
    else
      kernels::convolve_serial(w0.data(), w1.data(), v.data(), n, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}

template <bool Parallel>
void BM_HistorySum(benchmark::State& state) {
  // levels x (K = 3, I = 128) history, summed over all levels
  const auto levels = static_cast<std::size_t>(state.range(0));
  const std::size_t width = 127, stride = 3 * 129;
  const auto coef = noise(levels, 4), data = noise(levels * stride, 5);
  std::vector<double> out(width);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::history_sum_omp(coef.data(), levels, data.data(), stride, width, out.data());
    else
      kernels::history_sum_serial(coef.data(), levels, data.data(), stride, width, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Simulate(benchmark::State& state) {
  SystemSpec s;
  s.K = 3;
  s.orders = {0.9, 0.5, 0.3};
  s.diffusivities = {1.0, 1.0, 1.0};
  s.coupling = {{1.0, -0.5, -0.5}, {-0.5, 1.0, -0.5}, {-0.5, -0.5, 1.0}};
  s.initials = {[](double x) { return std::sin(x); }, [](double x) { return std::sin(2.0 * x); },
                [](double) { return 0.0; }};
  const Grid g{std::numbers::pi, 128, 100.0, static_cast<int>(state.range(0))};
  SimulationOptions opt;
  opt.parallel = Parallel;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s, g, opt));
}

template <bool Parallel>
void BM_Picard(benchmark::State& state) {
  OdeSpec s;
  s.alpha = 0.9;
  s.beta = 0.5;
  s.a = 1.0;
  s.eta1 = s.eta2 = 2.0;
  s.mu1 = s.mu2 = 1.0;
  PicardOptions opt;
  opt.parallel = Parallel;
  for (auto _ : state) benchmark::DoNotOptimize(picard_solve(s, 10.0, static_cast<int>(state.range(0)), opt));
}

}  // namespace

BENCHMARK(BM_Convolve<false>)->Name("convolve/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 14);
BENCHMARK(BM_Convolve<true>)->Name("convolve/omp")->RangeMultiplier(4)->Range(1 << 10, 1 << 14);
BENCHMARK(BM_HistorySum<false>)->Name("history_sum/serial")->Arg(1000)->Arg(4000);
BENCHMARK(BM_HistorySum<true>)->Name("history_sum/omp")->Arg(1000)->Arg(4000);
BENCHMARK(BM_Simulate<false>)->Name("simulate_k3/serial")->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulate<true>)->Name("simulate_k3/omp")->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Picard<false>)->Name("picard/serial")->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Picard<true>)->Name("picard/omp")->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
