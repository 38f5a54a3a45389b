#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tqkd/detector_model.hpp"
#include "tqkd/rng.hpp"
#include "tqkd/sarg04.hpp"

namespace tqkd {

/// Brightest Trojan pulse that does not itself cause a click in the attacked gate.
inline constexpr double kTrojanBrightnessCeiling = 2e6;

struct AttackTriad {
  std::uint32_t n_ab = 1;  // attack burst
  std::uint32_t n_el = 0;  // extinguished length
  std::uint32_t n_ss = 0;  // substitution sequence

  std::uint32_t total() const { return n_ab + n_el + n_ss; }

  friend bool operator==(const AttackTriad&, const AttackTriad&) = default;
};

/// Throws std::invalid_argument unless n_ab >= 1 and 1 <= total <= n_f.
void validate(const AttackTriad& triad, std::uint32_t n_f);

enum class SlotClass : std::uint8_t { kNormal, kAttacked, kSubstituted, kExtinguished };

std::string_view to_string(SlotClass c);

struct AttackPattern {
  std::vector<SlotClass> classes;  // element l-1 is slot l
  std::uint32_t k = 0;             // whole triads
  std::uint32_t n_u = 0;           // slots left at the start of the frame
  std::uint32_t n_el0 = 0;         // leading extinguished length
  bool extra_burst = false;        // n_u > n_ab

  std::uint32_t size() const { return static_cast<std::uint32_t>(classes.size()); }
  std::uint32_t count(SlotClass c) const;
};

/// Pattern of a frame Eve leaves alone.
AttackPattern normal_pattern(std::uint32_t n_f);

/// Tiles the triad from slot n_f backwards. Reading backwards each triad is
/// n_ab Attacked, n_el Extinguished, n_ss Substituted, so in time order every
/// burst is preceded by an extinguished stretch, followed by a substitution
/// sequence, and the frame ends on a burst. The n_u leftover slots at the start
/// hold one more burst when n_u > n_ab, preceded by n_el0 extinguished slots.
AttackPattern build_pattern(const AttackTriad& triad, std::uint32_t n_f);

/// Attacked/Substituted -> t_ll, Extinguished -> 0, Normal -> t.
std::vector<double> transmission_vector(const AttackPattern& pattern, double t, double t_ll);

/// Independent Bernoulli(r) per frame. One uniform per frame, so the attacked
/// set for a larger r contains the one for a smaller r on the same stream.
std::vector<bool> select_attacked_frames(double r, std::uint32_t n_frames, RandomStream& rng);

struct KnownTally {
  std::uint64_t known = 0;
  std::uint64_t total = 0;

  double f_known() const { return total == 0 ? 0.0 : static_cast<double>(known) / total; }

  KnownTally& operator+=(const KnownTally& o) {
    known += o.known;
    total += o.total;
    return *this;
  }
};

/// Marks records whose slot was Attacked and tallies them.
KnownTally eve_known_slots(const AttackPattern& pattern, std::span<SiftedRecord> records);

/// Exactly the Attacked slot indices.
BrightPulseLedger bright_ledger(const AttackPattern& pattern, double slot_period_us = kSlotPeriodUs);

struct AttackConfig {
  AttackTriad triad;
  double r = 0.0;     // fraction of attacked frames
  double t_ll = 0.9;  // low-loss line transmission
  double mu_eb = kTrojanBrightnessCeiling;
  /// Probability that Eve misreads Bob's basis on an attacked slot.
  double readout_error = 0.0;
};

void validate(const AttackConfig& cfg, std::uint32_t n_f);

}  // namespace tqkd
