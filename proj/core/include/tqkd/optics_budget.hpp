#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "tqkd/rng.hpp"

namespace tqkd {

/// One back-reflection seen from the receiver's entrance.
struct ReflectionEntry {
  double delay_ns = 0.0;  // exit time minus entry time
  double level_db = 0.0;  // <= 0
  std::string label;
  double wavelength_nm = 1550.0;
};

/// Reflectometer sensitivity floor at one wavelength.
struct SensitivityFloor {
  double wavelength_nm;
  double level_db;
};

/// The phase-modulator connector reflection (-57 dB, 43 ns, 1550 nm).
std::vector<ReflectionEntry> default_reflection_map();

/// -83 dB at 1550 nm and -96 dB at 806 nm.
std::vector<SensitivityFloor> reflectometer_floors();

/// Parses `delay_ns,level_db,label,wavelength_nm` rows. A header row is
/// optional. Throws std::invalid_argument with the line number on bad input.
std::vector<ReflectionEntry> load_reflection_map(std::istream& in);

/// mu_in * 10^(level_db / 10); throws std::domain_error for a positive level.
double back_reflection_mu(double mu_in, double level_db);

/// Best success probability for telling |alpha> from |-alpha> with
/// |alpha|^2 = mu: 1 - exp(-mu).
double max_discrimination_prob(double mu);

/// Balanced homodyne readout. Quadratures are in shot-noise units with vacuum
/// variance 1/4, so a coherent state of mean photon number mu sits at +-sqrt(mu).
struct HomodyneModel {
  double visibility = 1.0;
  double efficiency = 1.0;
  double electronic_noise_var = 0.0;
};

inline constexpr double kVacuumQuadratureVariance = 0.25;

void validate(const HomodyneModel& m);

/// Probability that a zero-threshold sign decision misreads the phase.
double homodyne_error_prob(double mu_sig, const HomodyneModel& model);

/// Electronic noise variance that brings the error probability at mu_sig up to
/// `target_error` (bisection). Throws std::domain_error when the target is
/// below the noiseless error or not below 1/2.
double electronic_noise_for_error(double mu_sig, double target_error, HomodyneModel base);

struct PhaseReadout {
  std::vector<std::uint8_t> estimated_bits;
  double correlation = 0.0;  // fraction of slots read correctly
};

/// One Gaussian quadrature sample per slot, sign from Bob's bit (0 -> +, 1 -> -),
/// thresholded at zero.
PhaseReadout simulate_phase_readout(std::span<const std::uint8_t> bob_bits, double mu_sig,
                                    const HomodyneModel& model, RandomStream& rng);

}  // namespace tqkd
