#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "tdac/tdac.hpp"

using namespace tdac;

static void BM_ClosedForm(benchmark::State& state) {
  const auto cfg = TdacConfig::from_ratio(static_cast<int>(state.range(0)), std::numbers::ln2);
  const auto code = DigitalCode::all_ones(cfg.bits());
  for (auto _ : state) benchmark::DoNotOptimize(convert_closed_form(cfg, code));
}
BENCHMARK(BM_ClosedForm)->Arg(8)->Arg(64);

static void BM_Quadrature(benchmark::State& state) {
  const auto cfg = TdacConfig::from_ratio(8, std::numbers::ln2);
  const auto code = DigitalCode::from_value(8, 0xA5);
  for (auto _ : state) benchmark::DoNotOptimize(convert_quadrature(cfg, code, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Quadrature)->Arg(16)->Arg(256);

static void BM_TransferCurve(benchmark::State& state) {
  const auto cfg = TdacConfig::from_ratio(static_cast<int>(state.range(0)), std::numbers::ln2);
  for (auto _ : state) benchmark::DoNotOptimize(linearity_report(transfer_curve(cfg)).max_abs_inl);
}
BENCHMARK(BM_TransferCurve)->Arg(8)->Arg(12);

static void BM_SimulateLeaky(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const TdacConfig cfg(q, 10.0 / q, 1.0, 1.0, 1.0);
  const auto code = DigitalCode::all_ones(q);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_leaky(cfg, LeakConfig(1.0), code, std::nullopt, 0.01).size());
}
BENCHMARK(BM_SimulateLeaky)->Arg(8)->Arg(1000);

static void BM_SimulateNumeric(benchmark::State& state) {
  const TdacConfig cfg(8, 0.6, 1.0, 1.0, 1.0);
  const auto code = DigitalCode::from_value(8, 0xA5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_leaky_numeric(cfg, LeakConfig(2.0), code, std::nullopt, 1e-3).size());
  }
}
BENCHMARK(BM_SimulateNumeric);

static void BM_FitDual(benchmark::State& state) {
  std::vector<Sample> s;
  for (int i = 0; i <= 1000; ++i) s.push_back({0.01 * i, dual_exp_waveform(1.0, 1.0, 0.5, 0.01 * i)});
  const Waveform w(std::move(s));
  for (auto _ : state) benchmark::DoNotOptimize(fit_waveform(w, FitModel::DualExponential).sse);
}
BENCHMARK(BM_FitDual);

static void BM_Calibrate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_pulse_width(1.0, 8, {0.3, 1.2}));
}
BENCHMARK(BM_Calibrate);
BENCHMARK_MAIN();
