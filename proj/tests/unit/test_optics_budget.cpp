#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "tqkd/optics_budget.hpp"

using namespace tqkd;

namespace {
constexpr auto kTest = static_cast<std::uint64_t>(StreamDomain::kTest);

double ideal_error(double mu) { return 0.5 * std::erfc(std::sqrt(2.0 * mu)); }
}  // namespace

TEST(OpticsBudget, PhotonBudgetFromConnectorReflection) {
  const double mu = back_reflection_mu(2e6, -57.0);
  EXPECT_GE(mu, 3.9);
  EXPECT_LE(mu, 4.1);
  EXPECT_NEAR(mu, 3.99052463, 1e-8);
  EXPECT_NEAR(max_discrimination_prob(mu), 0.98150999, 1e-8);
  EXPECT_NEAR(max_discrimination_prob(4.0), 0.98168436, 1e-8);
}

TEST(OpticsBudget, TrivialBudgets) {
  EXPECT_DOUBLE_EQ(back_reflection_mu(1.0, 0.0), 1.0);
  EXPECT_NEAR(max_discrimination_prob(1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(back_reflection_mu(1e8, -80.0), 1.0, 1e-12);
  EXPECT_EQ(max_discrimination_prob(0.0), 0.0);
  EXPECT_THROW(back_reflection_mu(1.0, 3.0), std::domain_error);
  EXPECT_THROW(max_discrimination_prob(-1.0), std::domain_error);
}

TEST(OpticsBudget, DefaultDataset) {
  const auto map = default_reflection_map();
  ASSERT_EQ(map.size(), 1u);
  EXPECT_EQ(map[0].delay_ns, 43.0);
  EXPECT_EQ(map[0].level_db, -57.0);
  EXPECT_EQ(map[0].label, "PM input connector");
  EXPECT_EQ(map[0].wavelength_nm, 1550.0);
  const auto floors = reflectometer_floors();
  ASSERT_EQ(floors.size(), 2u);
  EXPECT_EQ(floors[0].level_db, -83.0);
  EXPECT_EQ(floors[1].wavelength_nm, 806.0);
  EXPECT_EQ(floors[1].level_db, -96.0);
}

TEST(OpticsBudget, LoadReflectionMap) {
  std::istringstream with_header("delay_ns,level_db,label,wavelength_nm\n43,-57,PM input connector,1550\n"
                                 "12.5, -70 , splice ,806\n");
  const auto a = load_reflection_map(with_header);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[1].label, "splice");
  EXPECT_EQ(a[1].delay_ns, 12.5);
  std::istringstream no_header("43,-57,PM,1550\n");
  EXPECT_EQ(load_reflection_map(no_header).size(), 1u);
  std::istringstream bad("43,-57,PM,1550\n1,2\n");
  try {
    load_reflection_map(bad);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream positive("1,3,x,1550\n");
  EXPECT_THROW(load_reflection_map(positive), std::invalid_argument);
  std::istringstream garbage("1,abc,x,1550\n");
  EXPECT_THROW(load_reflection_map(garbage), std::invalid_argument);
}

TEST(OpticsBudget, IdealHomodyneError) {
  EXPECT_NEAR(homodyne_error_prob(3.0, {}), 2.66003e-4, 1e-9);
  EXPECT_NEAR(homodyne_error_prob(100.0, {}) / ideal_error(100.0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(homodyne_error_prob(0.0, {}), 0.5);
}

TEST(OpticsBudget, LossAndNoiseDegradeReadout) {
  const double ideal = homodyne_error_prob(1.0, {});
  EXPECT_GT(homodyne_error_prob(1.0, {0.8, 1.0, 0.0}), ideal);
  EXPECT_GT(homodyne_error_prob(1.0, {1.0, 0.5, 0.0}), ideal);
  EXPECT_GT(homodyne_error_prob(1.0, {1.0, 1.0, 0.5}), ideal);
  // eta V^2 mu and sigma^2 = 1/4 + e enter only through their ratio.
  EXPECT_NEAR(homodyne_error_prob(1.0, {1.0, 1.0, 0.25}), ideal_error(0.5), 1e-15);
  EXPECT_NEAR(homodyne_error_prob(4.0, {0.5, 1.0, 0.0}), ideal_error(1.0), 1e-15);
  EXPECT_THROW(homodyne_error_prob(1.0, {1.2, 1.0, 0.0}), std::invalid_argument);
}

TEST(OpticsBudget, NoiseCalibration) {
  const double e = electronic_noise_for_error(100.0, 0.10, {});
  HomodyneModel m;
  m.electronic_noise_var = e;
  EXPECT_NEAR(homodyne_error_prob(100.0, m), 0.10, 1e-9);
  EXPECT_NEAR(1.0 - homodyne_error_prob(100.0, m), 0.90, 1e-9);
  EXPECT_THROW(electronic_noise_for_error(100.0, 0.5, {}), std::domain_error);
  EXPECT_THROW(electronic_noise_for_error(1.0, 1e-6, {}), std::domain_error);
}

TEST(OpticsBudget, IdealReadoutCorrelation) {
  RandomStream bits_rng(1, {kTest});
  std::vector<std::uint8_t> bits(100000);
  for (auto& b : bits) b = bits_rng.coin();
  RandomStream rng(2, {kTest});
  const PhaseReadout r = simulate_phase_readout(bits, 100.0, {}, rng);
  EXPECT_GE(r.correlation, 0.99);
  ASSERT_EQ(r.estimated_bits.size(), bits.size());
}

TEST(OpticsBudget, SampledCorrelationMatchesAnalytic) {
  RandomStream bits_rng(3, {kTest});
  std::vector<std::uint8_t> bits(100000);
  for (auto& b : bits) b = bits_rng.coin();
  for (double mu : {0.1, 1.0, 3.0}) {
    RandomStream rng(4, {kTest, static_cast<std::uint64_t>(mu * 10)});
    const PhaseReadout r = simulate_phase_readout(bits, mu, {}, rng);
    const double err = homodyne_error_prob(mu, {});
    const double se = std::sqrt(err * (1.0 - err) / bits.size());
    EXPECT_NEAR(r.correlation, 1.0 - err, 3.0 * se) << mu;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) agree += r.estimated_bits[i] == bits[i];
    EXPECT_DOUBLE_EQ(r.correlation, agree / double(bits.size()));
  }
}

TEST(OpticsBudgetProperty, ErrorIsAProbabilityBelowHalf) {
  RandomStream rng(5, {kTest});
  for (int i = 0; i < 100000; ++i) {
    const HomodyneModel m{rng.uniform(), rng.uniform(), 2.0 * rng.uniform()};
    const double mu = 50.0 * rng.uniform();
    const double e = homodyne_error_prob(mu, m);
    ASSERT_GE(e, 0.0);
    ASSERT_LE(e, 0.5);
    const double p = max_discrimination_prob(mu);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
  }
}
