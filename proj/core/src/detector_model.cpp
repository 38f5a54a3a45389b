#include "tqkd/detector_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tqkd {

namespace {

void require_probability(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(field) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

void validate(const DetectorParams& params) {
  require_probability(params.eta, "eta");
  require_probability(params.dark, "dark");
  if (!(params.ap_amp1 >= 0.0)) throw std::invalid_argument("ap_amp1 must be >= 0");
  if (!(params.ap_amp2 >= 0.0)) throw std::invalid_argument("ap_amp2 must be >= 0");
  if (!(params.ap_tau1 > 0.0)) throw std::invalid_argument("ap_tau1 must be > 0");
  if (!(params.ap_tau2 > 0.0)) throw std::invalid_argument("ap_tau2 must be > 0");
}

DetectorParams clavis2_d0() {
  return {.eta = 0.12,
          .dark = 1.16e-4,
          .ap_amp1 = 3.572e-2,
          .ap_tau1 = 1.159,
          .ap_amp2 = 2.283e-2,
          .ap_tau2 = 4.277};
}

DetectorParams clavis2_d1() {
  return {.eta = 0.10,
          .dark = 3.63e-4,
          .ap_amp1 = 10.68e-2,
          .ap_tau1 = 0.705,
          .ap_amp2 = 5.054e-2,
          .ap_tau2 = 3.866};
}

DetectorProfile clavis2_profile() { return {"clavis2", clavis2_d0(), clavis2_d1(), 1.0}; }

DetectorProfile d0_both_profile() { return {"d0-both", clavis2_d0(), clavis2_d0(), 1.0}; }

DetectorProfile improved_profile(double tail_bound, std::uint32_t deadtime_gates) {
  if (!(tail_bound > 0.0 && tail_bound <= 1.0)) {
    throw std::invalid_argument("afterpulse tail bound must lie in (0, 1]");
  }
  DetectorParams d0 = clavis2_d0();
  DetectorParams d1 = clavis2_d1();
  const std::uint32_t first = deadtime_gates + 1;
  const double worst = std::max(afterpulse_tail(d0, first), afterpulse_tail(d1, first));
  const double scale = std::min({1.0, tail_bound / kClavis2QuotedAfterpulseTail,
                                 tail_bound * (1.0 - 1e-9) / worst});
  for (DetectorParams* d : {&d0, &d1}) {
    d->eta = 0.25;
    d->dark = 1e-5;
    d->ap_amp1 *= scale;
    d->ap_amp2 *= scale;
  }
  return {"improved", d0, d1, scale};
}

DetectorProfile builtin_profile(std::string_view name) {
  if (name == "clavis2") return clavis2_profile();
  if (name == "d0-both") return d0_both_profile();
  if (name == "improved") return improved_profile();
  throw std::invalid_argument("unknown detector profile '" + std::string(name) +
                              "' (expected clavis2, d0-both or improved)");
}

double afterpulse_tail(const DetectorParams& params, std::uint32_t first_gate,
                       double slot_period_us) {
  auto geometric = [&](double amp, double tau) {
    const double r = std::exp(-slot_period_us / tau);
    return amp * std::pow(r, first_gate) / (1.0 - r);
  };
  return geometric(params.ap_amp1, params.ap_tau1) + geometric(params.ap_amp2, params.ap_tau2);
}

void validate(const BrightPulseLedger& ledger, std::uint32_t n_slots) {
  if (!(ledger.slot_period_us > 0.0)) throw std::invalid_argument("ledger slot period must be > 0");
  std::uint32_t prev = 0;
  for (std::uint32_t s : ledger.slots) {
    if (s <= prev || s > n_slots) {
      throw std::invalid_argument("ledger slot " + std::to_string(s) +
                                  " out of order or outside [1, " + std::to_string(n_slots) + "]");
    }
    prev = s;
  }
}

double afterpulse_prob(const DetectorParams& params, double dt_us) {
  if (!(dt_us > 0.0)) throw std::domain_error("afterpulse delay must be positive");
  return clamp01(params.ap_amp1 * std::exp(-dt_us / params.ap_tau1) +
                 params.ap_amp2 * std::exp(-dt_us / params.ap_tau2));
}

double cumulative_afterpulse(const DetectorParams& params, const BrightPulseLedger& ledger,
                             std::uint32_t slot) {
  double sum = 0.0;
  for (std::uint32_t k : ledger.slots) {
    if (k >= slot) break;
    sum += afterpulse_prob(params, (slot - k) * ledger.slot_period_us);
  }
  return std::min(sum, 1.0);
}

std::vector<double> afterpulse_trace(const DetectorParams& params,
                                     const BrightPulseLedger& ledger, std::uint32_t n_slots) {
  std::vector<double> out(n_slots, 0.0);
  if (ledger.empty()) return out;
  if (params.ap_amp1 + params.ap_amp2 > 1.0) {
    for (std::uint32_t l = 1; l <= n_slots; ++l) out[l - 1] = cumulative_afterpulse(params, ledger, l);
    return out;
  }
  const double r1 = std::exp(-ledger.slot_period_us / params.ap_tau1);
  const double r2 = std::exp(-ledger.slot_period_us / params.ap_tau2);
  double s1 = 0.0;
  double s2 = 0.0;
  auto next = ledger.slots.begin();
  for (std::uint32_t l = 1; l <= n_slots; ++l) {
    out[l - 1] = std::min(s1 + s2, 1.0);
    const bool bright = next != ledger.slots.end() && *next == l;
    if (bright) ++next;
    s1 = r1 * (s1 + (bright ? params.ap_amp1 : 0.0));
    s2 = r2 * (s2 + (bright ? params.ap_amp2 : 0.0));
  }
  return out;
}

double noise_prob(double dark, double ap) { return clamp01(dark + ap - dark * ap); }

double photonic_prob(double eta, std::uint32_t photons) {
  if (photons == 0) return 0.0;
  return clamp01(1.0 - std::pow(1.0 - eta, static_cast<double>(photons)));
}

double total_detection_prob(double photonic, double noise) {
  return clamp01(photonic + noise - photonic * noise);
}

NoiseTrace noise_trace(const DetectorProfile& profile, const BrightPulseLedger& ledger,
                       std::uint32_t n_slots) {
  NoiseTrace trace;
  for (int j = 0; j < 2; ++j) {
    const DetectorParams& p = profile.detector(j);
    std::vector<double> ap = afterpulse_trace(p, ledger, n_slots);
    for (double& v : ap) v = noise_prob(p.dark, v);
    trace.per_detector[j] = std::move(ap);
  }
  return trace;
}

}  // namespace tqkd
