#include "tqkd/attack_strategy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tqkd {

void validate(const AttackTriad& triad, std::uint32_t n_f) {
  if (triad.n_ab == 0) throw std::invalid_argument("n_ab must be >= 1");
  if (triad.total() > n_f) {
    throw std::invalid_argument("triad length " + std::to_string(triad.total()) +
                                " exceeds the frame length " + std::to_string(n_f));
  }
}

std::string_view to_string(SlotClass c) {
  switch (c) {
    case SlotClass::kNormal: return "normal";
    case SlotClass::kAttacked: return "attacked";
    case SlotClass::kSubstituted: return "substituted";
    case SlotClass::kExtinguished: return "extinguished";
  }
  return "?";
}

std::uint32_t AttackPattern::count(SlotClass c) const {
  return static_cast<std::uint32_t>(std::count(classes.begin(), classes.end(), c));
}

AttackPattern normal_pattern(std::uint32_t n_f) {
  AttackPattern p;
  p.classes.assign(n_f, SlotClass::kNormal);
  return p;
}

AttackPattern build_pattern(const AttackTriad& triad, std::uint32_t n_f) {
  validate(triad, n_f);
  AttackPattern p;
  p.classes.assign(n_f, SlotClass::kExtinguished);
  p.k = n_f / triad.total();
  p.n_u = n_f - p.k * triad.total();

  std::uint32_t end = n_f;  // exclusive upper bound of the unfilled prefix, 0-based
  auto fill = [&](std::uint32_t len, SlotClass c) {
    std::fill(p.classes.begin() + (end - len), p.classes.begin() + end, c);
    end -= len;
  };
  for (std::uint32_t t = 0; t < p.k; ++t) {
    fill(triad.n_ab, SlotClass::kAttacked);
    fill(triad.n_el, SlotClass::kExtinguished);
    fill(triad.n_ss, SlotClass::kSubstituted);
  }
  p.extra_burst = p.n_u > triad.n_ab;
  if (p.extra_burst) fill(triad.n_ab, SlotClass::kAttacked);
  p.n_el0 = end;  // the remaining prefix is already Extinguished
  return p;
}

std::vector<double> transmission_vector(const AttackPattern& pattern, double t, double t_ll) {
  std::vector<double> out(pattern.size());
  for (std::uint32_t i = 0; i < pattern.size(); ++i) {
    switch (pattern.classes[i]) {
      case SlotClass::kNormal: out[i] = t; break;
      case SlotClass::kAttacked:
      case SlotClass::kSubstituted: out[i] = t_ll; break;
      case SlotClass::kExtinguished: out[i] = 0.0; break;
    }
  }
  return out;
}

std::vector<bool> select_attacked_frames(double r, std::uint32_t n_frames, RandomStream& rng) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("attack fraction r must lie in [0, 1]");
  std::vector<bool> out(n_frames);
  for (std::uint32_t f = 0; f < n_frames; ++f) out[f] = rng.uniform() < r;
  return out;
}

KnownTally eve_known_slots(const AttackPattern& pattern, std::span<SiftedRecord> records) {
  KnownTally tally;
  for (SiftedRecord& rec : records) {
    rec.eve_knows = rec.slot >= 1 && rec.slot <= pattern.size() &&
                    pattern.classes[rec.slot - 1] == SlotClass::kAttacked;
    tally.known += rec.eve_knows ? 1 : 0;
    ++tally.total;
  }
  return tally;
}

BrightPulseLedger bright_ledger(const AttackPattern& pattern, double slot_period_us) {
  BrightPulseLedger ledger;
  ledger.slot_period_us = slot_period_us;
  for (std::uint32_t i = 0; i < pattern.size(); ++i) {
    if (pattern.classes[i] == SlotClass::kAttacked) ledger.slots.push_back(i + 1);
  }
  return ledger;
}

void validate(const AttackConfig& cfg, std::uint32_t n_f) {
  validate(cfg.triad, n_f);
  if (!(cfg.r >= 0.0 && cfg.r <= 1.0)) throw std::invalid_argument("r must lie in [0, 1]");
  if (!(cfg.t_ll >= 0.0 && cfg.t_ll <= 1.0)) throw std::invalid_argument("t_ll must lie in [0, 1]");
  if (!(cfg.mu_eb >= 0.0 && cfg.mu_eb <= kTrojanBrightnessCeiling)) {
    throw std::invalid_argument("mu_eb must lie in [0, 2e6] (click-free brightness ceiling)");
  }
  if (!(cfg.readout_error >= 0.0 && cfg.readout_error <= 1.0)) {
    throw std::invalid_argument("readout_error must lie in [0, 1]");
  }
}

}  // namespace tqkd
