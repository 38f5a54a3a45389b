#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqkd/evaluator.hpp"
#include "tqkd/optics_budget.hpp"
#include "tqkd/sarg04.hpp"

namespace tqkd::cli {

/// Malformed or unknown configuration; the message names section and key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ReadoutSettings {
  double mu_sig = 100.0;
  std::uint32_t n_slots = 100000;
  HomodyneModel model;
};

struct BudgetSettings {
  std::optional<double> mu_in;
  std::optional<double> level_db;
  std::optional<std::string> map_path;
};

/// Everything a config file can set. Unset sections keep the preset defaults.
struct RunConfig {
  Scenario scenario = scenario_preset("clavis2");
  SweepSpec sweep = default_sweep_spec(scenario);
  EstTable est_table = default_est_table();
  ReadoutSettings readout;
  BudgetSettings budget;
};

/// Parses INI-style text:
///
///   [scenario]   preset
///   [detector]   profile, name, tail_bound
///   [detector_d0], [detector_d1]   eta, dark, ap_amp1, ap_tau1, ap_amp2, ap_tau2 (all six)
///   [channel]    t, t_bob, mu, n_slots, slot_period_us, deadtime_gates
///   [attack]     r, n_ab, n_el, n_ss, t_ll, mu_eb, readout_error
///   [protocol]   y, i_est, info_model (known-plus-leakage | known-only)
///   [est_table]  <any key> = <profile> <y> <T> <value>
///   [thresholds] q_abort, delta_max
///   [run]        n_sim, seed
///   [sweep]      r, n_ab, n_el, n_ss (comma-separated lists)
///   [readout]    mu_sig, n_slots, visibility, efficiency, electronic_noise_var
///   [budget]     mu_in, level_db, map
///
/// Unknown sections or keys are errors. I_est is looked up from the table for
/// the final (profile, y, T) unless [protocol] i_est is given.
RunConfig parse_config(std::istream& in);

RunConfig load_config(const std::string& path);

/// Defaults when no config file is given.
RunConfig default_config();

}  // namespace tqkd::cli
