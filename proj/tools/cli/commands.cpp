#include "cli/commands.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "cli/report.hpp"
#include "tqkd/optics_budget.hpp"
#include "tqkd/rng.hpp"

namespace tqkd::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int cmd_baseline(const RunConfig& cfg, RunManifest& m, std::ostream& out) {
  const BaselineResult b = run_baseline(cfg.scenario);
  Json j{{"scenario", scenario_json(cfg.scenario)}, {"baseline", baseline_json(b)},
         {"status", b.q ? "ok" : "no-data"}};
  const std::string text = dump(j);
  m.emit("baseline.json", text);
  out << text;
  return b.q ? kExitOk : kExitNoData;
}

int status_code(RunStatus s) {
  switch (s) {
    case RunStatus::kOk:
      return kExitOk;
    case RunStatus::kNoData:
      return kExitNoData;
    case RunStatus::kFailed:
      return kExitFailure;
  }
  return kExitFailure;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opts, RunManifest& m, std::ostream& out) {
  const Scenario& s = cfg.scenario;
  if (opts.trace_frame && *opts.trace_frame >= s.n_sim) {
    throw UsageError("--trace " + std::to_string(*opts.trace_frame) + " is outside frames 0.." +
                     std::to_string(s.n_sim - 1));
  }
  const BaselineResult b = run_baseline(s);
  const RunResult r = run_experiment(s, b);
  Json j{{"scenario", scenario_json(s)}, {"baseline", baseline_json(b)}, {"result", run_result_json(r)}};
  if (opts.trace_frame) {
    const FrameTrace t = trace_frame(s, *opts.trace_frame);
    m.emit("trace.csv", trace_csv(t));
    j["trace"] = Json{{"frame", t.frame_index}, {"attacked", t.attacked}, {"k", t.pattern.k},
                      {"n_u", t.pattern.n_u}, {"n_el0", t.pattern.n_el0}, {"extra_burst", t.pattern.extra_burst}};
  }
  m.emit("results.csv", results_csv({r}));
  const std::string text = dump(j);
  m.emit("result.json", text);
  out << text;
  return status_code(r.status);
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, RunManifest& m, std::ostream& out) {
  try {
    validate(cfg.sweep);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("sweep grid: ") + e.what());
  }
  const SweepResult res = sweep(cfg.sweep, opts.workers);
  std::size_t qber_ok = 0;
  std::size_t rate_ok = 0;
  std::size_t info_ok = 0;
  std::size_t failed = 0;
  for (const auto& r : res.ranked) {
    qber_ok += r.conditions.qber_below_abort;
    rate_ok += r.conditions.rate_within_tolerance;
    info_ok += r.conditions.info_exceeds_estimate;
    failed += r.status != RunStatus::kOk;
  }
  Json top = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, res.ranked.size()); ++i) {
    top.push_back(run_result_json(res.ranked[i]));
  }
  const auto& g = cfg.sweep;
  Json j{{"scenario", scenario_json(g.base)},
         {"seed", g.base.seed},
         {"grid", {{"r", g.r}, {"n_ab", g.n_ab}, {"n_el", g.n_el}, {"n_ss", g.n_ss}}},
         {"baseline", baseline_json(res.baseline)},
         {"combinations", res.ranked.size()},
         {"feasible_count", res.feasible_count()},
         {"condition_counts",
          {{"qber_below_abort", qber_ok}, {"rate_within_tolerance", rate_ok}, {"info_exceeds_estimate", info_ok}}},
         {"failed_count", failed},
         {"checks", {{"feasible_point_exists", res.feasible_count() > 0}}},
         {"top", top}};
  for (auto& v : j["grid"]["r"]) v = round9(v.get<double>());
  m.emit("results.csv", results_csv(res.ranked));
  const std::string text = dump(j);
  m.emit("summary.json", text);
  out << text;
  return kExitOk;
}

int cmd_budget(const RunConfig& cfg, const CommandOptions& opts, RunManifest& m, std::ostream& out) {
  const double mu_in = opts.mu_in.value_or(cfg.budget.mu_in.value_or(kTrojanBrightnessCeiling));
  std::optional<double> level = opts.level_db;
  if (!level && !opts.map_path) level = cfg.budget.level_db;
  const auto map = opts.map_path ? opts.map_path : cfg.budget.map_path;
  if (opts.level_db && opts.map_path) throw UsageError("--level-db and --map are mutually exclusive");
  if (!(mu_in >= 0.0) || !std::isfinite(mu_in)) throw UsageError("mu_in must be finite and >= 0");
  std::vector<ReflectionEntry> entries;
  if (level) {
    entries.push_back({0.0, *level, "manual", 1550.0});
  } else if (map) {
    std::ifstream in(*map);
    if (!in) throw UsageError("cannot open reflection map '" + *map + "'");
    try {
      entries = load_reflection_map(in);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(*map) + ": " + e.what());
    }
  } else {
    entries = default_reflection_map();
  }
  std::vector<BudgetRow> rows;
  try {
    rows = budget_rows(mu_in, entries);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  m.emit("budget.csv", budget_csv(rows));
  const std::string text = dump(budget_json(rows));
  m.emit("budget.json", text);
  out << text;
  return kExitOk;
}

int cmd_readout(const RunConfig& cfg, RunManifest& m, std::ostream& out) {
  const ReadoutSettings& rs = cfg.readout;
  try {
    validate(rs.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (rs.n_slots == 0) throw UsageError("[readout] n_slots must be >= 1");
  if (!(rs.mu_sig >= 0.0)) throw UsageError("[readout] mu_sig must be >= 0");
  const std::uint64_t seed = cfg.scenario.seed;
  RandomStream bits_rng(seed, {static_cast<std::uint64_t>(StreamDomain::kReadout), 0});
  std::vector<std::uint8_t> bits(rs.n_slots);
  for (auto& b : bits) b = bits_rng.coin() ? 1 : 0;
  RandomStream noise_rng(seed, {static_cast<std::uint64_t>(StreamDomain::kReadout), 1});
  const PhaseReadout r = simulate_phase_readout(bits, rs.mu_sig, rs.model, noise_rng);
  const double err = homodyne_error_prob(rs.mu_sig, rs.model);
  const double se = std::sqrt(err * (1.0 - err) / rs.n_slots);
  Json j{{"mu_sig", round9(rs.mu_sig)},
         {"n_slots", rs.n_slots},
         {"model",
          {{"visibility", round9(rs.model.visibility)},
           {"efficiency", round9(rs.model.efficiency)},
           {"electronic_noise_var", round9(rs.model.electronic_noise_var)}}},
         {"seed", seed},
         {"analytic_error", round9(err)},
         {"expected_correlation", round9(1.0 - err)},
         {"correlation", round9(r.correlation)},
         {"correlation_se", round9(se)}};
  const std::string text = dump(j);
  m.emit("readout.json", text);
  out << text;
  return kExitOk;
}

}  // namespace

int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = opts.config_path ? load_config(*opts.config_path) : default_config();
    if (opts.seed) {
      cfg.scenario.seed = *opts.seed;
      cfg.sweep.base.seed = *opts.seed;
    }
    if (opts.workers == 0) throw UsageError("--workers must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + opts.out_dir + "': " + ec.message());

    RunManifest m{opts.subcommand, opts.config_path, cfg.scenario.seed, opts.out_dir, {}};
    int code = kExitFailure;
    if (opts.subcommand == "baseline") {
      code = cmd_baseline(cfg, m, out);
    } else if (opts.subcommand == "simulate") {
      code = cmd_simulate(cfg, opts, m, out);
    } else if (opts.subcommand == "sweep") {
      code = cmd_sweep(cfg, opts, m, out);
    } else if (opts.subcommand == "budget") {
      code = cmd_budget(cfg, opts, m, out);
    } else if (opts.subcommand == "readout") {
      code = cmd_readout(cfg, m, out);
    } else {
      throw UsageError("unknown subcommand '" + opts.subcommand + "'");
    }
    m.write();
    if (code == kExitNoData) err << "tqkd: no conclusive slots; QBER is undefined\n";
    return code;
  } catch (const UsageError& e) {
    err << "tqkd: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "tqkd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "tqkd: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trojan-horse attack simulator for plug-and-play SARG04 QKD", "tqkd"};
  app.require_subcommand(1);
  CommandOptions opts;
  opts.workers = std::max(1u, std::thread::hardware_concurrency());
  std::string config;
  std::uint64_t seed = 0;
  std::uint32_t trace = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed (overrides [run] seed)");
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  };
  auto* baseline = app.add_subcommand("baseline", "Unattacked run: expected click rate and QBER");
  common(baseline);
  auto* simulate = app.add_subcommand("simulate", "Attack experiment for the configured triad and r");
  common(simulate);
  simulate->add_option("--trace", trace, "Write per-slot trace.csv for frame N (0-based)");
  auto* sw = app.add_subcommand("sweep", "Evaluate and rank the attack-parameter grid");
  common(sw);
  sw->add_option("--workers", opts.workers, "Concurrent combinations")->check(CLI::PositiveNumber);
  auto* budget = app.add_subcommand("budget", "Back-reflected photon numbers and discrimination bounds");
  common(budget);
  budget->add_option("--mu-in", opts.mu_in, "Injected mean photon number");
  budget->add_option("--level-db", opts.level_db, "Single reflection level in dB");
  budget->add_option("--map", opts.map_path, "Reflection map CSV")->check(CLI::ExistingFile);
  auto* readout = app.add_subcommand("readout", "Homodyne phase-readout Monte Carlo");
  common(readout);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tqkd: usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  CLI::App* chosen = app.get_subcommands().front();
  opts.subcommand = chosen->get_name();
  if (!config.empty()) opts.config_path = config;
  if (chosen->count("--seed") > 0) opts.seed = seed;
  if (chosen->get_name() == "simulate" && chosen->count("--trace") > 0) opts.trace_frame = trace;
  return run_command(opts, out, err);
}

}  // namespace tqkd::cli
