#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tqkd/detector_model.hpp"
#include "tqkd/rng.hpp"
#include "tqkd/states.hpp"

namespace tqkd {

/// Optimal SARG04 mean photon number for channel transmission t: 2 * sqrt(t).
inline double sarg04_optimal_mu(double t_channel) { return 2.0 * std::sqrt(t_channel); }

struct FrameConfig {
  std::uint32_t n_slots = 1075;
  double slot_period_us = kSlotPeriodUs;
  std::uint32_t deadtime_gates = 50;
  /// Mean photon number at Alice's exit; unset means sarg04_optimal_mu(t_channel).
  std::optional<double> mu;
  double t_channel = 0.25;
  double t_bob = 0.45;

  double mean_photon_number() const { return mu ? *mu : sarg04_optimal_mu(t_channel); }
};

/// Throws std::invalid_argument on the first violated field.
void validate(const FrameConfig& cfg);

/// Alice's prepared states and per-slot photon numbers.
struct Frame {
  std::vector<StateLabel> states;
  std::vector<std::uint32_t> photons;

  std::uint32_t size() const { return static_cast<std::uint32_t>(states.size()); }
};

struct DetectorCounts {
  std::vector<std::uint32_t> m0;
  std::vector<std::uint32_t> m1;
};

enum class SlotOutcome : std::uint8_t { kNone, kD0, kD1, kWithdrawn };

std::string_view to_string(SlotOutcome o);

/// A slot where at least one detector fired, before double-click resolution.
struct RawClick {
  std::uint32_t slot = 0;  // 1-based
  bool d0 = false;
  bool d1 = false;
};

struct ClickPattern {
  std::vector<SlotOutcome> outcomes;  // element l-1 is slot l
  std::vector<RawClick> raw;
  std::uint32_t double_clicks = 0;
  std::uint32_t withdrawn = 0;

  std::uint32_t clicks() const { return static_cast<std::uint32_t>(raw.size()); }
};

Frame generate_frame(const FrameConfig& cfg, RandomStream& rng);

/// Thins every photon independently with its slot's transmission.
/// Throws std::invalid_argument on a length mismatch.
Frame apply_channel(const Frame& frame, std::span<const double> transmission, RandomStream& rng);

std::vector<Basis> draw_bob_bases(std::uint32_t n_slots, RandomStream& rng);

/// Photons surviving Bob's internal loss go to the detector of the sent bit
/// when bases match and to a fair-coin detector each otherwise.
DetectorCounts route_photons(const Frame& frame, std::span<const Basis> bob_bases, double t_bob,
                             RandomStream& rng);

/// Gated detection with double-click resolution (fair coin) and deadtime.
/// Draws for withdrawn gates are skipped.
ClickPattern simulate_detection(const DetectorCounts& counts, const DetectorProfile& profile,
                                const BrightPulseLedger& ledger, const FrameConfig& cfg,
                                RandomStream& rng);

/// As above with the per-slot noise precomputed (it depends only on the ledger).
ClickPattern simulate_detection(const DetectorCounts& counts, const DetectorProfile& profile,
                                const NoiseTrace& noise, const FrameConfig& cfg,
                                RandomStream& rng);

/// Closed-form p_j(l) given the routed photon numbers.
std::array<std::vector<double>, 2> detection_probabilities(const DetectorCounts& counts,
                                                           const DetectorProfile& profile,
                                                           const NoiseTrace& noise);

}  // namespace tqkd
