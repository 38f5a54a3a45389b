#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tqkd/frame_sim.hpp"
#include "tqkd/rng.hpp"
#include "tqkd/states.hpp"

namespace tqkd {

/// A pair of non-orthogonal states announced by Alice, one per basis.
struct SiftingSet {
  StateLabel z;
  StateLabel x;

  friend constexpr bool operator==(SiftingSet, SiftingSet) = default;

  constexpr bool contains(StateLabel s) const { return s == z || s == x; }
};

/// The four admissible sets; every state belongs to exactly two of them.
inline constexpr std::array<SiftingSet, 4> kSiftingSets{{
    {kZ0, kX0},
    {kZ1, kX0},
    {kZ1, kX1},
    {kZ0, kX1},
}};

/// Uniform choice between the two sets that contain `sent`.
SiftingSet announce_set(StateLabel sent, RandomStream& rng);

/// Bob's outcome state is (bob_basis, detector index). If it is orthogonal to
/// exactly one set member the other member is inferred; otherwise the slot is
/// inconclusive (nullopt).
std::optional<StateLabel> sift(SiftingSet set, Basis bob_basis, Detector clicked);

struct SiftedRecord {
  std::uint32_t slot = 0;  // 1-based
  std::uint8_t alice_bit = 0;
  std::uint8_t bob_bit = 0;
  bool eve_knows = false;
};

struct Reconciliation {
  std::vector<SiftedRecord> records;
  std::uint64_t errors = 0;

  /// Unset when no slot was conclusive ("no data"); never reported as 0.
  std::optional<double> qber() const {
    if (records.empty()) return std::nullopt;
    return static_cast<double>(errors) / static_cast<double>(records.size());
  }
};

/// Sifts every clicked slot of a frame. `eve_slots` (1-based, ascending) marks
/// the records Eve knows.
Reconciliation reconcile(const Frame& frame, const ClickPattern& clicks,
                         std::span<const Basis> bob_bases, std::span<const std::uint32_t> eve_slots,
                         RandomStream& rng);

/// Shannon binary entropy in bits; throws std::domain_error outside [0, 1].
double binary_entropy(double x);

enum class EveInfoModel {
  /// f + (1 - f) h(q): Eve also holds the error-correction leakage on unknown bits.
  kKnownPlusLeakage,
  /// f alone.
  kKnownOnly,
};

/// Eve's actual information on the error-corrected key, scaled by (1 - y).
double eve_information(double f_known, double qber, double preprocessing,
                       EveInfoModel model = EveInfoModel::kKnownPlusLeakage);

class UnsupportedScenario : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Tabulated estimates of Eve's information used for privacy amplification,
/// keyed by (detector profile, preprocessing y, channel transmission T).
/// Lookups never interpolate.
class EstTable {
 public:
  void set(const std::string& profile, double y, double t, double value);

  /// Throws UnsupportedScenario when the key is absent.
  double lookup(const std::string& profile, double y, double t) const;

  bool contains(const std::string& profile, double y, double t) const;

  std::size_t size() const { return entries_.size(); }

 private:
  using Key = std::tuple<std::string, long long, long long>;
  static Key key(const std::string& profile, double y, double t);
  std::map<Key, double> entries_;
};

/// Values for T = 0.25.
EstTable default_est_table();

}  // namespace tqkd
