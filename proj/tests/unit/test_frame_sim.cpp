#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tqkd/frame_sim.hpp"

using namespace tqkd;

namespace {

constexpr auto kTest = static_cast<std::uint64_t>(StreamDomain::kTest);

DetectorProfile ideal_profile() {
  DetectorParams d{1.0, 0.0, 0.0, 1.0, 0.0, 1.0};
  return {"ideal", d, d, 1.0};
}

}  // namespace

TEST(FrameSim, OptimalMeanPhotonNumber) {
  EXPECT_EQ(sarg04_optimal_mu(0.25), 1.0);
  FrameConfig cfg;
  EXPECT_EQ(cfg.mean_photon_number(), 1.0);
  cfg.t_channel = 0.01;
  EXPECT_DOUBLE_EQ(cfg.mean_photon_number(), 0.2);
  cfg.mu = 0.5;
  EXPECT_EQ(cfg.mean_photon_number(), 0.5);
}

TEST(FrameSim, ConfigValidation) {
  FrameConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.t_bob = 1.2;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = FrameConfig{};
  cfg.n_slots = 0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}

TEST(FrameSim, GeneratedFrameStatistics) {
  FrameConfig cfg;
  cfg.n_slots = 100000;
  RandomStream rng(1, {kTest});
  const Frame f = generate_frame(cfg, rng);
  ASSERT_EQ(f.size(), cfg.n_slots);
  std::array<int, 4> per_state{};
  double photons = 0.0;
  for (std::uint32_t l = 0; l < f.size(); ++l) {
    ++per_state[f.states[l].index()];
    photons += f.photons[l];
  }
  for (int c : per_state) EXPECT_NEAR(c / 1e5, 0.25, 3.0 * std::sqrt(0.25 * 0.75 / 1e5));
  EXPECT_NEAR(photons / 1e5, 1.0, 3.0 * std::sqrt(1.0 / 1e5));
}

TEST(FrameSim, ChannelThinning) {
  Frame f;
  f.states.assign(4, kZ0);
  f.photons = {5, 5, 5, 100000};
  RandomStream rng(2, {kTest});
  const std::vector<double> t{0.0, 1.0, 0.5, 0.25};
  const Frame out = apply_channel(f, t, rng);
  EXPECT_EQ(out.photons[0], 0u);
  EXPECT_EQ(out.photons[1], 5u);
  EXPECT_LE(out.photons[2], 5u);
  EXPECT_NEAR(out.photons[3], 25000.0, 3.0 * std::sqrt(100000 * 0.25 * 0.75));
  EXPECT_EQ(out.states, f.states);
  const std::vector<double> short_t{1.0};
  EXPECT_THROW(apply_channel(f, short_t, rng), std::invalid_argument);
}

TEST(FrameSim, RoutingMatchedBasisIsDeterministic) {
  Frame f;
  f.states = {kZ0, kZ1, kX0, kX1};
  f.photons = {3, 4, 5, 6};
  const std::vector<Basis> bases{Basis::kZ, Basis::kZ, Basis::kX, Basis::kX};
  RandomStream rng(3, {kTest});
  const DetectorCounts c = route_photons(f, bases, 1.0, rng);
  EXPECT_EQ(c.m0, (std::vector<std::uint32_t>{3, 0, 5, 0}));
  EXPECT_EQ(c.m1, (std::vector<std::uint32_t>{0, 4, 0, 6}));
}

TEST(FrameSim, RoutingMismatchedBasisSplitsEvenly) {
  Frame f;
  f.states = {kZ0};
  f.photons = {200000};
  const std::vector<Basis> bases{Basis::kX};
  RandomStream rng(4, {kTest});
  const DetectorCounts c = route_photons(f, bases, 1.0, rng);
  EXPECT_EQ(c.m0[0] + c.m1[0], 200000u);
  EXPECT_NEAR(c.m0[0], 100000.0, 3.0 * std::sqrt(50000.0));
}

TEST(FrameSim, NoLightNoNoiseNoClicks) {
  FrameConfig cfg;
  DetectorParams d{0.5, 0.0, 0.0, 1.0, 0.0, 1.0};
  const DetectorProfile p{"silent", d, d, 1.0};
  const DetectorCounts c{std::vector<std::uint32_t>(cfg.n_slots, 0), std::vector<std::uint32_t>(cfg.n_slots, 0)};
  RandomStream rng(5, {kTest});
  const ClickPattern cp = simulate_detection(c, p, BrightPulseLedger{}, cfg, rng);
  EXPECT_EQ(cp.clicks(), 0u);
  EXPECT_EQ(cp.withdrawn, 0u);
}

TEST(FrameSim, ForcedClickStartsDeadtime) {
  FrameConfig cfg;
  cfg.n_slots = 100;
  DetectorCounts c{std::vector<std::uint32_t>(100, 0), std::vector<std::uint32_t>(100, 0)};
  c.m0[0] = 1;
  RandomStream rng(6, {kTest});
  const ClickPattern cp = simulate_detection(c, ideal_profile(), BrightPulseLedger{}, cfg, rng);
  EXPECT_EQ(cp.outcomes[0], SlotOutcome::kD0);
  for (int l = 2; l <= 51; ++l) EXPECT_EQ(cp.outcomes[l - 1], SlotOutcome::kWithdrawn) << l;
  for (int l = 52; l <= 100; ++l) EXPECT_EQ(cp.outcomes[l - 1], SlotOutcome::kNone) << l;
  EXPECT_EQ(cp.withdrawn, 50u);
  EXPECT_EQ(cp.clicks(), 1u);
}

TEST(FrameSim, DeadtimeTruncatedAtFrameEnd) {
  FrameConfig cfg;
  cfg.n_slots = 10;
  DetectorCounts c{std::vector<std::uint32_t>(10, 0), std::vector<std::uint32_t>(10, 0)};
  c.m1[7] = 2;
  RandomStream rng(7, {kTest});
  const ClickPattern cp = simulate_detection(c, ideal_profile(), BrightPulseLedger{}, cfg, rng);
  EXPECT_EQ(cp.outcomes[7], SlotOutcome::kD1);
  EXPECT_EQ(cp.withdrawn, 2u);
}

TEST(FrameSim, DoubleClicksResolveFairly) {
  FrameConfig cfg;
  cfg.n_slots = 100000;
  cfg.deadtime_gates = 0;
  DetectorCounts c{std::vector<std::uint32_t>(cfg.n_slots, 1), std::vector<std::uint32_t>(cfg.n_slots, 1)};
  RandomStream rng(8, {kTest});
  const ClickPattern cp = simulate_detection(c, ideal_profile(), BrightPulseLedger{}, cfg, rng);
  ASSERT_EQ(cp.double_clicks, cfg.n_slots);
  std::uint32_t d0 = 0;
  for (SlotOutcome o : cp.outcomes) d0 += o == SlotOutcome::kD0;
  EXPECT_NEAR(d0 / 1e5, 0.5, 3.0 * std::sqrt(0.25 / 1e5));
}

TEST(FrameSim, NoSlotIsBothClickedAndWithdrawn) {
  FrameConfig cfg;
  RandomStream rng(9, {kTest});
  const DetectorProfile p = clavis2_profile();
  for (int rep = 0; rep < 200; ++rep) {
    const Frame f = generate_frame(cfg, rng);
    const std::vector<double> t(cfg.n_slots, 0.25);
    const Frame at_bob = apply_channel(f, t, rng);
    const auto bases = draw_bob_bases(cfg.n_slots, rng);
    const DetectorCounts c = route_photons(at_bob, bases, cfg.t_bob, rng);
    const ClickPattern cp = simulate_detection(c, p, BrightPulseLedger{}, cfg, rng);
    std::uint32_t withdrawn = 0;
    for (const RawClick& rc : cp.raw) {
      ASSERT_NE(cp.outcomes[rc.slot - 1], SlotOutcome::kWithdrawn);
      ASSERT_NE(cp.outcomes[rc.slot - 1], SlotOutcome::kNone);
    }
    for (SlotOutcome o : cp.outcomes) withdrawn += o == SlotOutcome::kWithdrawn;
    ASSERT_EQ(withdrawn, cp.withdrawn);
    ASSERT_LE(cp.withdrawn, cp.clicks() * cfg.deadtime_gates);
  }
}

TEST(FrameSim, DarkOnlyClickRate) {
  FrameConfig cfg;
  cfg.mu = 0.0;
  cfg.deadtime_gates = 0;
  const DetectorProfile p = clavis2_profile();
  const std::uint32_t frames = 10000;
  std::array<double, 2> counts{};
  RandomStream rng(10, {kTest});
  const DetectorCounts none{std::vector<std::uint32_t>(cfg.n_slots, 0), std::vector<std::uint32_t>(cfg.n_slots, 0)};
  const NoiseTrace noise = noise_trace(p, BrightPulseLedger{}, cfg.n_slots);
  for (std::uint32_t f = 0; f < frames; ++f) {
    const ClickPattern cp = simulate_detection(none, p, noise, cfg, rng);
    for (const RawClick& rc : cp.raw) {
      counts[0] += rc.d0;
      counts[1] += rc.d1;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double expected = cfg.n_slots * p.detector(j).dark;
    EXPECT_NEAR(counts[j] / frames, expected, 0.05 * expected) << "detector " << j;
  }
}

TEST(FrameSim, ClosedFormProbabilities) {
  const DetectorProfile p = clavis2_profile();
  const DetectorCounts c{{0, 1, 3}, {2, 0, 0}};
  const BrightPulseLedger ledger{{1}};
  const NoiseTrace n = noise_trace(p, ledger, 3);
  const auto probs = detection_probabilities(c, p, n);
  for (int j = 0; j < 2; ++j) {
    const DetectorParams& d = p.detector(j);
    for (std::uint32_t l = 1; l <= 3; ++l) {
      const auto m = (j == 0 ? c.m0 : c.m1)[l - 1];
      const double ap = oracle::afterpulse_sum(d, ledger.slots, l);
      const double noise = d.dark + ap - d.dark * ap;
      const double s = 1.0 - std::pow(1.0 - d.eta, m);
      EXPECT_NEAR(probs[j][l - 1], s + noise - s * noise, 1e-15);
    }
  }
}

// Fixed 20-slot scenario: mixed transmissions and a short bright-pulse ledger,
// no deadtime, so each gate is an independent trial.
TEST(FrameSimOracle, MonteCarloMatchesClosedFormWithinThreeSigma) {
  FrameConfig cfg;
  cfg.n_slots = 20;
  cfg.deadtime_gates = 0;
  const DetectorProfile p = clavis2_profile();
  const BrightPulseLedger ledger{{3, 4, 5, 12}};
  std::vector<double> t(20, 0.25);
  for (std::uint32_t l : {3u, 4u, 5u, 12u, 13u, 14u}) t[l - 1] = 0.9;
  for (std::uint32_t l : {8u, 9u, 10u}) t[l - 1] = 0.0;
  const NoiseTrace noise = noise_trace(p, ledger, 20);

  const int reps = 100000;
  std::array<std::vector<double>, 2> freq{std::vector<double>(20, 0.0), std::vector<double>(20, 0.0)};
  RandomStream rng(11, {kTest});
  for (int r = 0; r < reps; ++r) {
    const Frame f = generate_frame(cfg, rng);
    const Frame at_bob = apply_channel(f, t, rng);
    const auto bases = draw_bob_bases(20, rng);
    const DetectorCounts c = route_photons(at_bob, bases, cfg.t_bob, rng);
    const ClickPattern cp = simulate_detection(c, p, noise, cfg, rng);
    for (const RawClick& rc : cp.raw) {
      freq[0][rc.slot - 1] += rc.d0;
      freq[1][rc.slot - 1] += rc.d1;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const DetectorParams& d = p.detector(j);
    for (std::uint32_t l = 1; l <= 20; ++l) {
      const double ap = oracle::afterpulse_sum(d, ledger.slots, l);
      const double n = d.dark + ap - d.dark * ap;
      const double expect = oracle::click_probability(1.0, t[l - 1], cfg.t_bob, d.eta, n);
      const double se = std::sqrt(expect * (1.0 - expect) / reps);
      EXPECT_NEAR(freq[j][l - 1] / reps, expect, 3.0 * se) << "detector " << j << " slot " << l;
    }
  }
}
