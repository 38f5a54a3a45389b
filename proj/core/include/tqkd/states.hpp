#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace tqkd {

enum class Basis : std::uint8_t { kZ = 0, kX = 1 };

inline constexpr Basis other(Basis b) { return b == Basis::kZ ? Basis::kX : Basis::kZ; }

/// Key-bit encoding of a basis: Z -> 0, X -> 1.
inline constexpr std::uint8_t basis_bit(Basis b) { return static_cast<std::uint8_t>(b); }

/// One of the four SARG04 states. Alice's phase phi_A maps Z0 -> 0, X0 -> pi/2,
/// Z1 -> pi, X1 -> 3pi/2.
struct StateLabel {
  Basis basis = Basis::kZ;
  std::uint8_t bit = 0;

  friend constexpr bool operator==(StateLabel, StateLabel) = default;

  /// Dense index 0..3 in the order Z0, Z1, X0, X1.
  constexpr unsigned index() const { return 2u * basis_bit(basis) + bit; }

  static constexpr StateLabel from_index(unsigned i) {
    return {static_cast<Basis>(i >> 1), static_cast<std::uint8_t>(i & 1u)};
  }
};

inline constexpr StateLabel kZ0{Basis::kZ, 0};
inline constexpr StateLabel kZ1{Basis::kZ, 1};
inline constexpr StateLabel kX0{Basis::kX, 0};
inline constexpr StateLabel kX1{Basis::kX, 1};

inline constexpr std::array<StateLabel, 4> kAllStates{kZ0, kZ1, kX0, kX1};

/// Orthogonality only holds within one basis.
inline constexpr bool orthogonal(StateLabel a, StateLabel b) {
  return a.basis == b.basis && a.bit != b.bit;
}

inline constexpr std::string_view to_string(StateLabel s) {
  constexpr std::array<std::string_view, 4> names{"Z0", "Z1", "X0", "X1"};
  return names[s.index()];
}

inline constexpr std::string_view to_string(Basis b) { return b == Basis::kZ ? "Z" : "X"; }

enum class Detector : std::uint8_t { kD0 = 0, kD1 = 1 };

}  // namespace tqkd
