#include <benchmark/benchmark.h>

#include "tqkd/tqkd.hpp"

using namespace tqkd;

static void BM_AfterpulseTrace(benchmark::State& state) {
  const AttackPattern p = build_pattern({10, 50, 100}, 1075);
  const BrightPulseLedger ledger = bright_ledger(p);
  for (auto _ : state) benchmark::DoNotOptimize(afterpulse_trace(clavis2_d1(), ledger, 1075));
}
BENCHMARK(BM_AfterpulseTrace);

static void BM_BuildPattern(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_pattern({5, 50, 25}, 1075));
}
BENCHMARK(BM_BuildPattern);

static void BM_FramePipeline(benchmark::State& state) {
  const FrameConfig cfg;
  const DetectorProfile profile = clavis2_profile();
  const NoiseTrace noise = noise_trace(profile, BrightPulseLedger{}, cfg.n_slots);
  const std::vector<double> t(cfg.n_slots, cfg.t_channel);
  RandomStream rng(1);
  for (auto _ : state) {
    const Frame f = generate_frame(cfg, rng);
    const Frame at_bob = apply_channel(f, t, rng);
    const auto bases = draw_bob_bases(cfg.n_slots, rng);
    const DetectorCounts c = route_photons(at_bob, bases, cfg.t_bob, rng);
    const ClickPattern cp = simulate_detection(c, profile, noise, cfg, rng);
    benchmark::DoNotOptimize(reconcile(f, cp, bases, {}, rng));
  }
}
BENCHMARK(BM_FramePipeline);

static void BM_AttackExperiment(benchmark::State& state) {
  Scenario s = scenario_preset("clavis2");
  s.n_sim = 100;
  s.attack = {{10, 50, 100}, 0.6, 0.9};
  const BaselineResult b = run_baseline(s);
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(s, b));
}
BENCHMARK(BM_AttackExperiment)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
