#include "tqkd/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace tqkd {

namespace {

/// What differs between attacked and untouched frames; built once per run.
struct FramePlan {
  AttackPattern pattern;
  std::vector<double> transmission;
  NoiseTrace noise;
  std::vector<std::uint32_t> eve_slots;
  bool attacked = false;
};

FramePlan normal_plan(const Scenario& s) {
  FramePlan plan;
  plan.pattern = normal_pattern(s.frame.n_slots);
  plan.transmission.assign(s.frame.n_slots, s.frame.t_channel);
  plan.noise = noise_trace(s.profile, BrightPulseLedger{{}, s.frame.slot_period_us}, s.frame.n_slots);
  return plan;
}

FramePlan attack_plan(const Scenario& s) {
  FramePlan plan;
  plan.attacked = true;
  plan.pattern = build_pattern(s.attack.triad, s.frame.n_slots);
  plan.transmission = transmission_vector(plan.pattern, s.frame.t_channel, s.attack.t_ll);
  const BrightPulseLedger ledger = bright_ledger(plan.pattern, s.frame.slot_period_us);
  plan.noise = noise_trace(s.profile, ledger, s.frame.n_slots);
  plan.eve_slots = ledger.slots;
  return plan;
}

struct FrameRun {
  Frame at_alice;
  Frame at_bob;
  std::vector<Basis> bases;
  DetectorCounts counts;
  ClickPattern clicks;
  Reconciliation sifted;
};

FrameRun simulate_frame(const Scenario& s, const FramePlan& plan, RandomStream& rng) {
  FrameRun run;
  run.at_alice = generate_frame(s.frame, rng);
  run.at_bob = apply_channel(run.at_alice, plan.transmission, rng);
  run.bases = draw_bob_bases(s.frame.n_slots, rng);
  run.counts = route_photons(run.at_bob, run.bases, s.frame.t_bob, rng);
  run.clicks = simulate_detection(run.counts, s.profile, plan.noise, s.frame, rng);
  run.sifted = reconcile(run.at_bob, run.clicks, run.bases, plan.eve_slots, rng);
  if (s.attack.readout_error > 0.0) {
    for (SiftedRecord& rec : run.sifted.records) {
      if (rec.eve_knows && rng.bernoulli(s.attack.readout_error)) rec.eve_knows = false;
    }
  }
  return run;
}

RandomStream baseline_stream(const Scenario& s, std::uint32_t frame) {
  return RandomStream(s.seed, {static_cast<std::uint64_t>(StreamDomain::kBaselineFrames), frame});
}

RandomStream attack_stream(const Scenario& s, std::uint32_t frame) {
  const AttackTriad& t = s.attack.triad;
  return RandomStream(s.seed, {static_cast<std::uint64_t>(StreamDomain::kAttackFrames), t.n_ab,
                               t.n_el, t.n_ss, frame});
}

std::vector<bool> attacked_frames(const Scenario& s) {
  RandomStream rng(s.seed, {static_cast<std::uint64_t>(StreamDomain::kFrameSelection)});
  return select_attacked_frames(s.attack.r, s.n_sim, rng);
}

double binomial_se(double p, std::uint64_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct ClickMoments {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  double mean(std::uint32_t n) const { return sum / n; }
  double se(std::uint32_t n) const {
    if (n < 2) return 0.0;
    const double m = mean(n);
    const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

void validate(const Scenario& s) {
  validate(s.profile.d0);
  validate(s.profile.d1);
  validate(s.frame);
  validate(s.attack, s.frame.n_slots);
  if (!(s.y >= 0.0 && s.y <= 1.0)) throw std::invalid_argument("preprocessing y must lie in [0, 1]");
  if (!(s.thresholds.q_abort > 0.0 && s.thresholds.q_abort < 1.0)) {
    throw std::invalid_argument("q_abort must lie in (0, 1)");
  }
  if (!(s.thresholds.delta_max > 0.0 && s.thresholds.delta_max < 1.0)) {
    throw std::invalid_argument("delta_max must lie in (0, 1)");
  }
  if (!(s.i_est >= 0.0 && s.i_est <= 1.0)) throw std::invalid_argument("i_est must lie in [0, 1]");
  if (s.n_sim < 1) throw std::invalid_argument("n_sim must be >= 1");
}

Scenario scenario_preset(std::string_view name, const EstTable& table) {
  Scenario s;
  s.name = std::string(name);
  if (name == "clavis2") {
    s.profile = clavis2_profile();
    s.y = 0.0;
    s.thresholds = {0.08, 0.15};
  } else if (name == "d0-both") {
    s.profile = d0_both_profile();
    s.y = 0.4;
    s.thresholds = {0.11, 0.15};
  } else if (name == "improved") {
    s.profile = improved_profile();
    s.y = 0.0;
    s.thresholds = {0.08, 0.15};
  } else {
    throw std::invalid_argument("unknown scenario preset '" + s.name +
                                "' (expected clavis2, d0-both or improved)");
  }
  s.i_est = table.lookup(s.profile.name, s.y, s.frame.t_channel);
  return s;
}

BaselineResult run_baseline(const Scenario& s) {
  validate(s);
  const FramePlan plan = normal_plan(s);
  BaselineResult out;
  out.n_sim = s.n_sim;
  ClickMoments moments;
  for (std::uint32_t f = 0; f < s.n_sim; ++f) {
    RandomStream rng = baseline_stream(s, f);
    const FrameRun run = simulate_frame(s, plan, rng);
    moments.add(run.clicks.clicks());
    out.clicks += run.clicks.clicks();
    out.conclusive += run.sifted.records.size();
    out.errors += run.sifted.errors;
  }
  out.gamma_exp = moments.mean(s.n_sim);
  out.gamma_se = moments.se(s.n_sim);
  if (out.conclusive > 0) {
    out.q = static_cast<double>(out.errors) / static_cast<double>(out.conclusive);
    out.q_se = binomial_se(*out.q, out.conclusive);
  }
  return out;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kNoData: return "no-data";
    case RunStatus::kFailed: return "failed";
  }
  return "?";
}

FeasibilityConditions evaluate_conditions(const RunResult& r, const Thresholds& t) {
  FeasibilityConditions c;
  if (r.status != RunStatus::kOk || !r.q || !r.delta_b) return c;
  c.qber_below_abort = *r.q < t.q_abort;
  c.rate_within_tolerance = *r.delta_b <= t.delta_max;
  c.info_exceeds_estimate = r.i_act > r.i_est;
  return c;
}

RunResult run_experiment(const Scenario& s, const std::optional<BaselineResult>& baseline) {
  validate(s);
  RunResult out;
  out.r = s.attack.r;
  out.triad = s.attack.triad;
  out.i_est = s.i_est;
  out.gamma_exp = baseline ? baseline->gamma_exp : run_baseline(s).gamma_exp;

  const FramePlan normal = normal_plan(s);
  const FramePlan attack = attack_plan(s);
  const std::vector<bool> selected = attacked_frames(s);

  RunDiagnostics& d = out.diagnostics;
  ClickMoments moments;
  for (std::uint32_t f = 0; f < s.n_sim; ++f) {
    const FramePlan& plan = selected[f] ? attack : normal;
    RandomStream rng = attack_stream(s, f);
    const FrameRun run = simulate_frame(s, plan, rng);
    d.attacked_frames += selected[f] ? 1 : 0;
    moments.add(run.clicks.clicks());
    d.clicks += run.clicks.clicks();
    d.double_clicks += run.clicks.double_clicks;
    d.withdrawn_gates += run.clicks.withdrawn;
    d.conclusive += run.sifted.records.size();
    d.errors += run.sifted.errors;
    for (const SiftedRecord& rec : run.sifted.records) d.known += rec.eve_knows ? 1 : 0;
  }
  out.gamma_obs = moments.mean(s.n_sim);
  out.gamma_obs_se = moments.se(s.n_sim);

  if (d.conclusive == 0) {
    out.status = RunStatus::kNoData;
    out.message = "no conclusive slots";
    return out;
  }
  out.q = static_cast<double>(d.errors) / static_cast<double>(d.conclusive);
  out.q_se = binomial_se(*out.q, d.conclusive);
  out.f_known = static_cast<double>(d.known) / static_cast<double>(d.conclusive);
  out.f_known_se = binomial_se(out.f_known, d.conclusive);
  out.i_act = eve_information(out.f_known, *out.q, s.y, s.info_model);
  if (out.gamma_exp <= 0.0) {
    out.status = RunStatus::kNoData;
    out.message = "expected detection rate is zero";
    return out;
  }
  out.delta_b = std::fabs(1.0 - out.gamma_obs / out.gamma_exp);
  out.conditions = evaluate_conditions(out, s.thresholds);
  out.feasible = out.conditions.all();
  return out;
}

SweepSpec default_sweep_spec(const Scenario& base) {
  return {{0.2, 0.4, 0.6, 0.8, 1.0}, {5, 10, 20, 40}, {0, 50, 100, 200}, {25, 50, 100, 200}, base};
}

void validate(const SweepSpec& spec) {
  if (spec.r.empty() || spec.n_ab.empty() || spec.n_el.empty() || spec.n_ss.empty()) {
    throw std::invalid_argument("sweep grid has an empty parameter list");
  }
  for (double r : spec.r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("sweep r values must lie in [0, 1]");
  }
  for (auto ab : spec.n_ab)
    for (auto el : spec.n_el)
      for (auto ss : spec.n_ss) validate(AttackTriad{ab, el, ss}, spec.base.frame.n_slots);
  validate(spec.base);
}

std::size_t SweepResult::feasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(ranked.begin(), ranked.end(), [](const RunResult& r) { return r.feasible; }));
}

void rank_results(std::vector<RunResult>& results) {
  auto margin = [](const RunResult& r) {
    return r.status == RunStatus::kOk ? r.i_act - r.i_est : -std::numeric_limits<double>::infinity();
  };
  auto ident = [](const RunResult& r) {
    return std::make_tuple(r.r, r.triad.n_ab, r.triad.n_el, r.triad.n_ss);
  };
  std::sort(results.begin(), results.end(), [&](const RunResult& a, const RunResult& b) {
    if (a.feasible != b.feasible) return a.feasible;
    const bool a_ok = a.status == RunStatus::kOk;
    const bool b_ok = b.status == RunStatus::kOk;
    if (a_ok != b_ok) return a_ok;
    if (margin(a) != margin(b)) return margin(a) > margin(b);
    return ident(a) < ident(b);
  });
}

SweepResult sweep(const SweepSpec& spec, unsigned workers) {
  validate(spec);
  SweepResult out;
  out.baseline = run_baseline(spec.base);

  std::vector<Scenario> jobs;
  jobs.reserve(spec.combinations());
  for (double r : spec.r)
    for (auto ab : spec.n_ab)
      for (auto el : spec.n_el)
        for (auto ss : spec.n_ss) {
          Scenario s = spec.base;
          s.attack.r = r;
          s.attack.triad = {ab, el, ss};
          jobs.push_back(std::move(s));
        }

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_experiment(jobs[i], out.baseline);
      } catch (const std::exception& e) {
        RunResult failed;
        failed.r = jobs[i].attack.r;
        failed.triad = jobs[i].attack.triad;
        failed.i_est = jobs[i].i_est;
        failed.gamma_exp = out.baseline.gamma_exp;
        failed.status = RunStatus::kFailed;
        failed.message = e.what();
        results[i] = std::move(failed);
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  rank_results(results);
  out.ranked = std::move(results);
  return out;
}

FrameTrace trace_frame(const Scenario& s, std::uint32_t frame_index, bool baseline_stream_flag) {
  validate(s);
  if (frame_index >= s.n_sim) {
    throw std::invalid_argument("trace frame " + std::to_string(frame_index) + " outside [0, " +
                                std::to_string(s.n_sim) + ")");
  }
  FrameTrace t;
  t.frame_index = frame_index;
  t.attacked = !baseline_stream_flag && attacked_frames(s)[frame_index];
  const FramePlan plan = t.attacked ? attack_plan(s) : normal_plan(s);
  RandomStream rng =
      baseline_stream_flag ? baseline_stream(s, frame_index) : attack_stream(s, frame_index);
  FrameRun run = simulate_frame(s, plan, rng);
  t.pattern = plan.pattern;
  t.noise = plan.noise;
  t.p = detection_probabilities(run.counts, s.profile, plan.noise);
  t.at_alice = std::move(run.at_alice);
  t.at_bob = std::move(run.at_bob);
  t.bob_bases = std::move(run.bases);
  t.counts = std::move(run.counts);
  t.clicks = std::move(run.clicks);
  t.sifted = std::move(run.sifted);
  return t;
}

}  // namespace tqkd
