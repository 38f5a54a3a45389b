#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tqkd {

/// Gate spacing of the receiver, microseconds (5 MHz gating).
inline constexpr double kSlotPeriodUs = 0.2;

/// Gated avalanche photodiode. Afterpulsing per bright pulse follows
/// a(dt) = amp1 * exp(-dt / tau1) + amp2 * exp(-dt / tau2), dt in microseconds.
struct DetectorParams {
  double eta = 0.0;      // single-photon efficiency
  double dark = 0.0;     // dark-count probability per gate
  double ap_amp1 = 0.0;
  double ap_tau1 = 1.0;  // us
  double ap_amp2 = 0.0;
  double ap_tau2 = 1.0;  // us

  friend bool operator==(const DetectorParams&, const DetectorParams&) = default;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const DetectorParams& params);

struct DetectorProfile {
  std::string name;
  DetectorParams d0;
  DetectorParams d1;
  /// Factor applied to the Clavis2 afterpulse amplitudes; 1 for measured profiles.
  double afterpulse_scale = 1.0;

  const DetectorParams& detector(int j) const { return j == 0 ? d0 : d1; }
};

/// Detector rows as characterised for the Clavis2 receiver.
DetectorParams clavis2_d0();
DetectorParams clavis2_d1();

DetectorProfile clavis2_profile();
/// Both detectors behave like Clavis2's D0.
DetectorProfile d0_both_profile();
/// Quoted cumulative afterpulse click probability of Clavis2 after its 50-gate deadtime.
inline constexpr double kClavis2QuotedAfterpulseTail = 0.80;

/// eta = 0.25 and dark = 1e-5 on both detectors with Clavis2 decay constants.
/// Both amplitudes of both detectors are scaled by
/// min(1, tail_bound / kClavis2QuotedAfterpulseTail, just-below tail_bound / tail).
DetectorProfile improved_profile(double tail_bound = 0.10, std::uint32_t deadtime_gates = 50);

/// Built-in profile lookup: "clavis2", "d0-both", "improved".
DetectorProfile builtin_profile(std::string_view name);

/// Sum over gates l >= first_gate of a(l * slot_period), in closed form.
double afterpulse_tail(const DetectorParams& params, std::uint32_t first_gate,
                       double slot_period_us = kSlotPeriodUs);

/// Slot indices (1-based, strictly increasing) that received a Trojan pulse.
struct BrightPulseLedger {
  std::vector<std::uint32_t> slots;
  double slot_period_us = kSlotPeriodUs;

  bool empty() const { return slots.empty(); }
};

/// Throws std::invalid_argument unless indices are strictly increasing in [1, n_slots].
void validate(const BrightPulseLedger& ledger, std::uint32_t n_slots);

/// Afterpulse probability dt microseconds after one bright pulse, clamped to [0, 1].
/// Throws std::domain_error for dt <= 0.
double afterpulse_prob(const DetectorParams& params, double dt_us);

/// Summed afterpulse probability at `slot` from every ledger entry before it,
/// clamped to 1.
double cumulative_afterpulse(const DetectorParams& params, const BrightPulseLedger& ledger,
                             std::uint32_t slot);

/// Afterpulse probabilities for slots 1..n_slots (element l-1 is slot l).
/// Linear-time recurrence; agrees with cumulative_afterpulse.
std::vector<double> afterpulse_trace(const DetectorParams& params,
                                     const BrightPulseLedger& ledger, std::uint32_t n_slots);

/// Union of two independent noise sources: dark + ap - dark * ap.
double noise_prob(double dark, double ap);

/// 1 - (1 - eta)^m.
double photonic_prob(double eta, std::uint32_t photons);

/// Union of photonic and noise clicks: s + n - s * n.
double total_detection_prob(double photonic, double noise);

/// Per-slot noise probability n_j(l) for both detectors.
struct NoiseTrace {
  std::array<std::vector<double>, 2> per_detector;

  std::uint32_t size() const { return static_cast<std::uint32_t>(per_detector[0].size()); }
};

NoiseTrace noise_trace(const DetectorProfile& profile, const BrightPulseLedger& ledger,
                       std::uint32_t n_slots);

}  // namespace tqkd
