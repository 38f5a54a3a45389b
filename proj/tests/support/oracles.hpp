#pragma once

// Reference implementations written independently of the library, used as
// test oracles. They favour directness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tqkd/attack_strategy.hpp"
#include "tqkd/detector_model.hpp"

namespace oracle {

inline double afterpulse_single(const tqkd::DetectorParams& p, double dt_us) {
  return p.ap_amp1 * std::exp(-dt_us / p.ap_tau1) + p.ap_amp2 * std::exp(-dt_us / p.ap_tau2);
}

/// Direct sum of every earlier bright pulse, clamped to 1.
inline double afterpulse_sum(const tqkd::DetectorParams& p, const std::vector<std::uint32_t>& bright,
                             std::uint32_t slot, double period_us = 0.2) {
  double sum = 0.0;
  for (std::uint32_t b : bright) {
    if (b < slot) sum += afterpulse_single(p, (slot - b) * period_us);
  }
  return std::min(sum, 1.0);
}

inline double poisson_pmf(unsigned k, double mean) {
  return std::exp(k * std::log(mean > 0 ? mean : 1.0) - mean - std::lgamma(k + 1.0)) *
         (mean > 0 || k == 0 ? 1.0 : 0.0);
}

inline double binomial_pmf(unsigned k, unsigned n, double p) {
  if (k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
}

/// Probability that detector `j` fires in one gate when Alice sends a uniformly
/// random SARG04 state with Poisson(mu) photons, the channel and Bob's optics
/// thin each photon with t and t_bob, Bob picks a uniformly random basis and
/// the detector has noise probability `noise`. Exhaustive over photon numbers
/// up to `cutoff` at every stage.
inline double click_probability(double mu, double t, double t_bob, double eta, double noise,
                                unsigned cutoff = 30) {
  double miss = 0.0;  // probability that no photon fires the detector
  for (unsigned n = 0; n <= cutoff; ++n) {
    const double pn = poisson_pmf(n, mu);
    for (unsigned c = 0; c <= n; ++c) {
      const double pc = binomial_pmf(c, n, t);
      for (unsigned b = 0; b <= c; ++b) {
        const double pb = binomial_pmf(b, c, t_bob);
        // Matched basis (1/2): all photons go to j with probability 1/2.
        const double matched = 0.5 * std::pow(1.0 - eta, b) + 0.5;
        // Mismatched basis (1/2): each photon reaches j by a fair coin.
        double mismatched = 0.0;
        for (unsigned m = 0; m <= b; ++m) mismatched += binomial_pmf(m, b, 0.5) * std::pow(1.0 - eta, m);
        miss += pn * pc * pb * (0.5 * matched + 0.5 * mismatched);
      }
    }
  }
  return 1.0 - miss * (1.0 - noise);
}

/// Slot classes from the distance to the frame end: whole triads read
/// backwards as burst, extinguished, substituted; the leftover prefix holds one
/// more burst only when it is longer than a burst.
inline std::vector<tqkd::SlotClass> tile(const tqkd::AttackTriad& t, std::uint32_t n_f) {
  using tqkd::SlotClass;
  const std::uint32_t len = t.n_ab + t.n_el + t.n_ss;
  const std::uint32_t k = n_f / len;
  const std::uint32_t n_u = n_f - k * len;
  std::vector<SlotClass> out(n_f);
  for (std::uint32_t l = 1; l <= n_f; ++l) {
    const std::uint32_t d = n_f - l;
    SlotClass c;
    if (d < k * len) {
      const std::uint32_t j = d % len;
      c = j < t.n_ab ? SlotClass::kAttacked
                     : (j < t.n_ab + t.n_el ? SlotClass::kExtinguished : SlotClass::kSubstituted);
    } else {
      const std::uint32_t e = d - k * len;
      c = (n_u > t.n_ab && e < t.n_ab) ? SlotClass::kAttacked : SlotClass::kExtinguished;
    }
    out[l - 1] = c;
  }
  return out;
}

inline double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace oracle
