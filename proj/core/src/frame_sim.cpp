#include "tqkd/frame_sim.hpp"

#include <stdexcept>
#include <string>

namespace tqkd {

namespace {

void require_probability(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(field) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

std::uint32_t thin(std::uint32_t n, double p, RandomStream& rng) {
  std::uint32_t kept = 0;
  for (std::uint32_t i = 0; i < n; ++i) kept += rng.bernoulli(p) ? 1u : 0u;
  return kept;
}

bool photonic_click(std::uint32_t photons, double eta, RandomStream& rng) {
  bool click = false;
  for (std::uint32_t i = 0; i < photons; ++i) click |= rng.bernoulli(eta);
  return click;
}

}  // namespace

void validate(const FrameConfig& cfg) {
  if (cfg.n_slots < 1) throw std::invalid_argument("n_slots must be >= 1");
  if (!(cfg.slot_period_us > 0.0)) throw std::invalid_argument("slot_period must be > 0");
  if (cfg.mu && !(*cfg.mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
  require_probability(cfg.t_channel, "t_channel");
  require_probability(cfg.t_bob, "t_bob");
}

std::string_view to_string(SlotOutcome o) {
  switch (o) {
    case SlotOutcome::kNone: return "none";
    case SlotOutcome::kD0: return "D0";
    case SlotOutcome::kD1: return "D1";
    case SlotOutcome::kWithdrawn: return "withdrawn";
  }
  return "?";
}

Frame generate_frame(const FrameConfig& cfg, RandomStream& rng) {
  const PoissonSampler poisson(cfg.mean_photon_number());
  Frame frame;
  frame.states.resize(cfg.n_slots);
  frame.photons.resize(cfg.n_slots);
  for (std::uint32_t l = 0; l < cfg.n_slots; ++l) {
    frame.states[l] = StateLabel::from_index(rng.top_bits(2));
    frame.photons[l] = poisson(rng);
  }
  return frame;
}

Frame apply_channel(const Frame& frame, std::span<const double> transmission, RandomStream& rng) {
  if (transmission.size() != frame.size()) {
    throw std::invalid_argument("transmission vector has " + std::to_string(transmission.size()) +
                                " entries for a frame of " + std::to_string(frame.size()) + " slots");
  }
  Frame out = frame;
  for (std::uint32_t l = 0; l < frame.size(); ++l) {
    out.photons[l] = thin(frame.photons[l], transmission[l], rng);
  }
  return out;
}

std::vector<Basis> draw_bob_bases(std::uint32_t n_slots, RandomStream& rng) {
  std::vector<Basis> bases(n_slots);
  for (Basis& b : bases) b = static_cast<Basis>(rng.top_bits(1));
  return bases;
}

DetectorCounts route_photons(const Frame& frame, std::span<const Basis> bob_bases, double t_bob,
                             RandomStream& rng) {
  if (bob_bases.size() != frame.size()) throw std::invalid_argument("basis sequence length mismatch");
  DetectorCounts counts{std::vector<std::uint32_t>(frame.size(), 0),
                        std::vector<std::uint32_t>(frame.size(), 0)};
  for (std::uint32_t l = 0; l < frame.size(); ++l) {
    const std::uint32_t survivors = thin(frame.photons[l], t_bob, rng);
    const StateLabel sent = frame.states[l];
    if (sent.basis == bob_bases[l]) {
      (sent.bit == 0 ? counts.m0 : counts.m1)[l] = survivors;
      continue;
    }
    for (std::uint32_t i = 0; i < survivors; ++i) {
      if (rng.coin()) {
        ++counts.m1[l];
      } else {
        ++counts.m0[l];
      }
    }
  }
  return counts;
}

ClickPattern simulate_detection(const DetectorCounts& counts, const DetectorProfile& profile,
                                const BrightPulseLedger& ledger, const FrameConfig& cfg,
                                RandomStream& rng) {
  validate(ledger, cfg.n_slots);
  return simulate_detection(counts, profile, noise_trace(profile, ledger, cfg.n_slots), cfg, rng);
}

ClickPattern simulate_detection(const DetectorCounts& counts, const DetectorProfile& profile,
                                const NoiseTrace& noise, const FrameConfig& cfg,
                                RandomStream& rng) {
  const std::uint32_t n = cfg.n_slots;
  if (counts.m0.size() != n || counts.m1.size() != n || noise.size() != n) {
    throw std::invalid_argument("detector inputs do not match the frame length");
  }
  const auto& n0 = noise.per_detector[0];
  const auto& n1 = noise.per_detector[1];
  ClickPattern pattern;
  pattern.outcomes.assign(n, SlotOutcome::kNone);
  std::uint32_t dead_until = 0;  // slots l <= dead_until (1-based) are withdrawn
  for (std::uint32_t l = 1; l <= n; ++l) {
    const std::uint32_t i = l - 1;
    if (l <= dead_until) {
      pattern.outcomes[i] = SlotOutcome::kWithdrawn;
      ++pattern.withdrawn;
      continue;
    }
    bool c0 = photonic_click(counts.m0[i], profile.d0.eta, rng);
    c0 |= rng.bernoulli(n0[i]);
    bool c1 = photonic_click(counts.m1[i], profile.d1.eta, rng);
    c1 |= rng.bernoulli(n1[i]);
    if (!c0 && !c1) continue;
    pattern.raw.push_back({l, c0, c1});
    bool to_d1 = c1;
    if (c0 && c1) {
      ++pattern.double_clicks;
      to_d1 = rng.coin();
    }
    pattern.outcomes[i] = to_d1 ? SlotOutcome::kD1 : SlotOutcome::kD0;
    dead_until = l + cfg.deadtime_gates;
  }
  return pattern;
}

std::array<std::vector<double>, 2> detection_probabilities(const DetectorCounts& counts,
                                                           const DetectorProfile& profile,
                                                           const NoiseTrace& noise) {
  std::array<std::vector<double>, 2> p;
  for (int j = 0; j < 2; ++j) {
    const auto& m = j == 0 ? counts.m0 : counts.m1;
    const double eta = profile.detector(j).eta;
    p[j].resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      p[j][i] = total_detection_prob(photonic_prob(eta, m[i]), noise.per_detector[j][i]);
    }
  }
  return p;
}

}  // namespace tqkd
