#include "tqkd/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tqkd {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t k : key) {
    h = mix64(h ^ mix64(k + 0x3c6ef372fe94f82bULL));
  }
  return h;
}

double RandomStream::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr double kInversionLimit = 30.0;

std::uint32_t poisson_inversion(RandomStream& rng, double mean) {
  double u = rng.uniform();
  double p = std::exp(-mean);
  std::uint32_t k = 0;
  double cdf = p;
  while (u >= cdf) {
    ++k;
    p *= mean / k;
    cdf += p;
    if (p <= 0.0 && cdf <= u) break;  // numerically exhausted tail
  }
  return k;
}

// Hormann (1993), transformed rejection with squeeze.
std::uint32_t poisson_ptrs(RandomStream& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint32_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
    const double rhs = -mean + k * loglam - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::uint32_t>(k);
  }
}

}  // namespace

std::uint32_t RandomStream::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::domain_error("poisson mean must be non-negative");
  if (mean < kInversionLimit) return poisson_inversion(*this, mean);
  return poisson_ptrs(*this, mean);
}

PoissonSampler::PoissonSampler(double mean) : mean_(mean) {
  if (!(mean >= 0.0)) throw std::domain_error("poisson mean must be non-negative");
  if (mean >= kInversionLimit) return;
  double p = std::exp(-mean);
  double cdf = p;
  cdf_.push_back(cdf);
  for (std::uint32_t k = 1; cdf < 1.0 - 1e-16 && k < 200; ++k) {
    p *= mean / k;
    if (p <= 0.0) break;
    cdf += p;
    cdf_.push_back(cdf);
  }
}

std::uint32_t PoissonSampler::operator()(RandomStream& rng) const {
  if (cdf_.empty()) return rng.poisson(mean_);
  const double u = rng.uniform();
  std::uint32_t k = 0;
  const auto n = static_cast<std::uint32_t>(cdf_.size());
  while (k < n && u >= cdf_[k]) ++k;
  return k;
}

}  // namespace tqkd
