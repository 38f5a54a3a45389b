#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace tqkd {

/// Mixes a 64-bit word (SplitMix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a sub-stream seed from a master seed and a key path.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> key);

/// Domain tags used as the first element of a key path.
enum class StreamDomain : std::uint64_t {
  kBaselineFrames = 0x62617365,  // "base"
  kAttackFrames = 0x61747466,    // "attf"
  kFrameSelection = 0x73656c63,  // "selc"
  kReadout = 0x72656164,         // "read"
  kTest = 0x74657374,
};

/// Random stream over std::mt19937_64 with hand-written samplers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  RandomStream(std::uint64_t master, std::initializer_list<std::uint64_t> key)
      : engine_(derive_seed(master, key)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, 2^bits), 1 <= bits <= 32, served from a buffered
  /// 64-bit word.
  unsigned top_bits(unsigned bits) {
    if (available_ < bits) {
      buffer_ = engine_();
      available_ = 64;
    }
    const auto v = static_cast<unsigned>(buffer_ >> (64 - bits));
    buffer_ <<= bits;
    available_ -= bits;
    return v;
  }

  bool coin() { return top_bits(1) == 1; }

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal();

  /// Poisson deviate; inversion for small means, PTRS rejection otherwise.
  std::uint32_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  unsigned available_ = 0;
};

/// Inversion sampler with a precomputed CDF for a fixed small Poisson mean.
/// Falls back to RandomStream::poisson when the mean is large.
class PoissonSampler {
 public:
  explicit PoissonSampler(double mean);

  std::uint32_t operator()(RandomStream& rng) const;

  double mean() const { return mean_; }

 private:
  double mean_;
  std::vector<double> cdf_;
};

}  // namespace tqkd
