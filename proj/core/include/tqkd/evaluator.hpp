#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tqkd/attack_strategy.hpp"
#include "tqkd/detector_model.hpp"
#include "tqkd/frame_sim.hpp"
#include "tqkd/sarg04.hpp"

namespace tqkd {

struct Thresholds {
  double q_abort = 0.08;
  double delta_max = 0.15;
};

/// One end-to-end configuration: receiver, channel, attack, classical
/// post-processing and the abort thresholds Alice and Bob apply.
struct Scenario {
  std::string name = "clavis2";
  DetectorProfile profile = clavis2_profile();
  FrameConfig frame;
  AttackConfig attack;
  double y = 0.0;  // preprocessing
  Thresholds thresholds;
  double i_est = 0.4844;
  EveInfoModel info_model = EveInfoModel::kKnownPlusLeakage;
  std::uint32_t n_sim = 10000;
  std::uint64_t seed = 1;
};

void validate(const Scenario& s);

/// Profile, preprocessing, thresholds and I_est for the named study:
/// "clavis2", "d0-both" (y = 0.4, q_abort = 0.11) or "improved".
Scenario scenario_preset(std::string_view name, const EstTable& table = default_est_table());

struct BaselineResult {
  double gamma_exp = 0.0;  // clicks per frame
  double gamma_se = 0.0;
  std::optional<double> q;
  double q_se = 0.0;
  std::uint64_t clicks = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t errors = 0;
  std::uint32_t n_sim = 0;
};

/// n_sim unattacked frames on their own sub-stream.
BaselineResult run_baseline(const Scenario& s);

struct RunDiagnostics {
  std::uint32_t attacked_frames = 0;
  std::uint64_t clicks = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t errors = 0;
  std::uint64_t known = 0;
  std::uint64_t double_clicks = 0;
  std::uint64_t withdrawn_gates = 0;
};

enum class RunStatus { kOk, kNoData, kFailed };

std::string_view to_string(RunStatus s);

struct FeasibilityConditions {
  bool qber_below_abort = false;       // q < q_abort
  bool rate_within_tolerance = false;  // delta_b <= delta_max
  bool info_exceeds_estimate = false;  // i_act > i_est

  bool all() const { return qber_below_abort && rate_within_tolerance && info_exceeds_estimate; }
};

struct RunResult {
  double r = 0.0;
  AttackTriad triad;
  std::optional<double> q;
  double q_se = 0.0;
  double gamma_obs = 0.0;
  double gamma_obs_se = 0.0;
  double gamma_exp = 0.0;
  std::optional<double> delta_b;
  double f_known = 0.0;
  double f_known_se = 0.0;
  double i_act = 0.0;
  double i_est = 0.0;
  FeasibilityConditions conditions;
  bool feasible = false;
  RunStatus status = RunStatus::kOk;
  std::string message;
  RunDiagnostics diagnostics;
};

/// Recomputes the three conditions from stored fields.
FeasibilityConditions evaluate_conditions(const RunResult& r, const Thresholds& t);

/// Full attack experiment. The baseline is computed when not supplied.
/// Frame streams are keyed by (seed, triad, frame index) and the frame
/// selection stream by seed alone.
RunResult run_experiment(const Scenario& s, const std::optional<BaselineResult>& baseline = std::nullopt);

struct SweepSpec {
  std::vector<double> r;
  std::vector<std::uint32_t> n_ab;
  std::vector<std::uint32_t> n_el;
  std::vector<std::uint32_t> n_ss;
  Scenario base;

  std::size_t combinations() const { return r.size() * n_ab.size() * n_el.size() * n_ss.size(); }
};

/// r in {0.2..1.0}, n_ab in {5, 10, 20, 40}, n_el in {0, 50, 100, 200}, n_ss in {25, 50, 100, 200}.
SweepSpec default_sweep_spec(const Scenario& base);

/// Throws std::invalid_argument on an empty list or a triad that does not fit.
void validate(const SweepSpec& spec);

struct SweepResult {
  BaselineResult baseline;
  std::vector<RunResult> ranked;

  std::size_t feasible_count() const;
};

/// Feasible first, then by i_act - i_est descending; ties and failures are
/// ordered by (r, n_ab, n_el, n_ss). Output is identical for any worker count.
SweepResult sweep(const SweepSpec& spec, unsigned workers = 1);

void rank_results(std::vector<RunResult>& results);

/// Everything about one simulated frame, for per-slot export.
struct FrameTrace {
  std::uint32_t frame_index = 0;
  bool attacked = false;
  AttackPattern pattern;
  Frame at_alice;
  Frame at_bob;
  std::vector<Basis> bob_bases;
  DetectorCounts counts;
  NoiseTrace noise;
  std::array<std::vector<double>, 2> p;
  ClickPattern clicks;
  Reconciliation sifted;
};

/// Re-simulates frame `frame_index` of run_experiment (or of run_baseline when
/// `baseline_stream` is set) bit-identically.
FrameTrace trace_frame(const Scenario& s, std::uint32_t frame_index, bool baseline_stream = false);

}  // namespace tqkd
