#include "tqkd/sarg04.hpp"

#include <algorithm>
#include <cmath>

namespace tqkd {

SiftingSet announce_set(StateLabel sent, RandomStream& rng) {
  std::array<SiftingSet, 2> candidates{};
  std::size_t n = 0;
  for (const SiftingSet& s : kSiftingSets) {
    if (s.contains(sent)) candidates[n++] = s;
  }
  return candidates[rng.coin() ? 1 : 0];
}

std::optional<StateLabel> sift(SiftingSet set, Basis bob_basis, Detector clicked) {
  const StateLabel outcome{bob_basis, static_cast<std::uint8_t>(clicked)};
  const bool rules_out_z = orthogonal(outcome, set.z);
  const bool rules_out_x = orthogonal(outcome, set.x);
  if (rules_out_z == rules_out_x) return std::nullopt;
  return rules_out_z ? set.x : set.z;
}

Reconciliation reconcile(const Frame& frame, const ClickPattern& clicks,
                         std::span<const Basis> bob_bases, std::span<const std::uint32_t> eve_slots,
                         RandomStream& rng) {
  if (clicks.outcomes.size() != frame.size() || bob_bases.size() != frame.size()) {
    throw std::invalid_argument("reconcile inputs have inconsistent lengths");
  }
  Reconciliation out;
  for (std::uint32_t i = 0; i < frame.size(); ++i) {
    const SlotOutcome o = clicks.outcomes[i];
    if (o != SlotOutcome::kD0 && o != SlotOutcome::kD1) continue;
    const StateLabel sent = frame.states[i];
    const SiftingSet set = announce_set(sent, rng);
    const Detector det = o == SlotOutcome::kD0 ? Detector::kD0 : Detector::kD1;
    if (!sift(set, bob_bases[i], det)) continue;
    SiftedRecord rec;
    rec.slot = i + 1;
    rec.alice_bit = static_cast<std::uint8_t>(1u - basis_bit(sent.basis));
    rec.bob_bit = basis_bit(bob_bases[i]);
    rec.eve_knows = std::binary_search(eve_slots.begin(), eve_slots.end(), rec.slot);
    if (rec.alice_bit != rec.bob_bit) ++out.errors;
    out.records.push_back(rec);
  }
  return out;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary entropy argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double eve_information(double f_known, double qber, double preprocessing, EveInfoModel model) {
  const double known = model == EveInfoModel::kKnownOnly
                           ? f_known
                           : f_known + (1.0 - f_known) * binary_entropy(qber);
  return std::clamp((1.0 - preprocessing) * known, 0.0, 1.0);
}

EstTable::Key EstTable::key(const std::string& profile, double y, double t) {
  // Keys are quantised to 1e-9.
  return {profile, std::llround(y * 1e9), std::llround(t * 1e9)};
}

void EstTable::set(const std::string& profile, double y, double t, double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("I_est must lie in [0, 1]");
  entries_[key(profile, y, t)] = value;
}

bool EstTable::contains(const std::string& profile, double y, double t) const {
  return entries_.contains(key(profile, y, t));
}

double EstTable::lookup(const std::string& profile, double y, double t) const {
  auto it = entries_.find(key(profile, y, t));
  if (it == entries_.end()) {
    throw UnsupportedScenario("no tabulated I_est for profile '" + profile + "', y = " +
                              std::to_string(y) + ", T = " + std::to_string(t));
  }
  return it->second;
}

EstTable default_est_table() {
  EstTable table;
  table.set("clavis2", 0.0, 0.25, 0.4844);
  table.set("clavis2", 0.5, 0.25, 0.1106);
  table.set("d0-both", 0.4, 0.25, 0.1336);
  table.set("improved", 0.0, 0.25, 0.5037);
  return table;
}

}  // namespace tqkd
