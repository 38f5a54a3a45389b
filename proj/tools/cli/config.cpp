#include "cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace tqkd::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) {
  throw ConfigError("config [" + section + "] " + key + ": " + what);
}

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(section, key, "cannot parse '" + text + "' as a number");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& section, const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_value<T>(section, key, item));
  if (out.empty()) fail(section, key, "empty list");
  return out;
}

using Handler = std::function<void(const std::string& value)>;

/// Applies every key of one section through its handler table.
void apply_section(const std::string& name, const pt::ptree& section,
                   const std::map<std::string, Handler>& handlers) {
  for (const auto& [key, node] : section) {
    if (!node.empty()) fail(name, key, "nested keys are not supported");
    auto it = handlers.find(key);
    if (it == handlers.end()) fail(name, key, "unknown key");
    it->second(node.data());
  }
}

DetectorParams parse_detector(const std::string& name, const pt::ptree& section) {
  DetectorParams p;
  std::set<std::string> seen;
  auto num = [&](double& field) {
    return [&, name](const std::string& v) { field = parse_value<double>(name, "", v); };
  };
  std::map<std::string, Handler> handlers{
      {"eta", num(p.eta)},         {"dark", num(p.dark)},       {"ap_amp1", num(p.ap_amp1)},
      {"ap_tau1", num(p.ap_tau1)}, {"ap_amp2", num(p.ap_amp2)}, {"ap_tau2", num(p.ap_tau2)},
  };
  for (auto& [key, h] : handlers) {
    h = [&seen, key = key, inner = h](const std::string& v) {
      seen.insert(key);
      inner(v);
    };
  }
  apply_section(name, section, handlers);
  if (seen.size() != handlers.size()) {
    fail(name, "", "all six fields (eta, dark, ap_amp1, ap_tau1, ap_amp2, ap_tau2) are required");
  }
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    fail(name, "", e.what());
  }
  return p;
}

const std::vector<std::string> kSectionOrder{
    "scenario", "detector", "detector_d0", "detector_d1", "channel", "attack", "protocol",
    "est_table", "thresholds", "run", "sweep", "readout", "budget"};

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.sweep = default_sweep_spec(cfg.scenario);
  return cfg;
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::map<std::string, const pt::ptree*> sections;
  for (const auto& [name, node] : tree) {
    if (node.empty() && !node.data().empty()) fail("", name, "key outside of any section");
    if (std::find(kSectionOrder.begin(), kSectionOrder.end(), name) == kSectionOrder.end()) {
      throw ConfigError("config: unknown section [" + name + "]");
    }
    sections[name] = &node;
  }
  auto section = [&](const std::string& name) -> const pt::ptree* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : it->second;
  };

  RunConfig cfg;
  Scenario& s = cfg.scenario;
  std::optional<double> explicit_i_est;
  std::optional<std::string> profile_label;
  double tail_bound = 0.10;
  std::optional<std::string> builtin;

  if (auto* sec = section("scenario")) {
    apply_section("scenario", *sec, {{"preset", [&](const std::string& v) {
                                        try {
                                          s = scenario_preset(trim(v));
                                        } catch (const std::exception& e) {
                                          fail("scenario", "preset", e.what());
                                        }
                                      }}});
  }
  if (auto* sec = section("detector")) {
    apply_section("detector", *sec,
                  {{"profile", [&](const std::string& v) { builtin = trim(v); }},
                   {"name", [&](const std::string& v) { profile_label = trim(v); }},
                   {"tail_bound", [&](const std::string& v) {
                      tail_bound = parse_value<double>("detector", "tail_bound", v);
                    }}});
    if (builtin) {
      try {
        s.profile = *builtin == "improved" ? improved_profile(tail_bound, s.frame.deadtime_gates)
                                           : builtin_profile(*builtin);
      } catch (const std::exception& e) {
        fail("detector", "profile", e.what());
      }
    }
  }
  bool custom = false;
  if (auto* sec = section("detector_d0")) {
    s.profile.d0 = parse_detector("detector_d0", *sec);
    custom = true;
  }
  if (auto* sec = section("detector_d1")) {
    s.profile.d1 = parse_detector("detector_d1", *sec);
    custom = true;
  }
  if (custom) {
    s.profile.name = "custom";
    s.profile.afterpulse_scale = 1.0;
  }
  if (profile_label) s.profile.name = *profile_label;

  auto dbl = [](const char* sec, const char* key, double& field) {
    return std::make_pair(std::string(key),
                          Handler([=, &field](const std::string& v) { field = parse_value<double>(sec, key, v); }));
  };
  auto u32 = [](const char* sec, const char* key, std::uint32_t& field) {
    return std::make_pair(std::string(key), Handler([=, &field](const std::string& v) {
                            field = parse_value<std::uint32_t>(sec, key, v);
                          }));
  };

  if (auto* sec = section("channel")) {
    apply_section("channel", *sec,
                  {dbl("channel", "t", s.frame.t_channel), dbl("channel", "t_bob", s.frame.t_bob),
                   {"mu", [&](const std::string& v) { s.frame.mu = parse_value<double>("channel", "mu", v); }},
                   u32("channel", "n_slots", s.frame.n_slots),
                   dbl("channel", "slot_period_us", s.frame.slot_period_us),
                   u32("channel", "deadtime_gates", s.frame.deadtime_gates)});
  }
  if (auto* sec = section("attack")) {
    apply_section("attack", *sec,
                  {dbl("attack", "r", s.attack.r), u32("attack", "n_ab", s.attack.triad.n_ab),
                   u32("attack", "n_el", s.attack.triad.n_el), u32("attack", "n_ss", s.attack.triad.n_ss),
                   dbl("attack", "t_ll", s.attack.t_ll), dbl("attack", "mu_eb", s.attack.mu_eb),
                   dbl("attack", "readout_error", s.attack.readout_error)});
  }
  if (auto* sec = section("protocol")) {
    apply_section("protocol", *sec,
                  {dbl("protocol", "y", s.y),
                   {"i_est", [&](const std::string& v) { explicit_i_est = parse_value<double>("protocol", "i_est", v); }},
                   {"info_model", [&](const std::string& v) {
                      const std::string m = trim(v);
                      if (m == "known-plus-leakage") {
                        s.info_model = EveInfoModel::kKnownPlusLeakage;
                      } else if (m == "known-only") {
                        s.info_model = EveInfoModel::kKnownOnly;
                      } else {
                        fail("protocol", "info_model", "expected known-plus-leakage or known-only, got '" + m + "'");
                      }
                    }}});
  }
  if (auto* sec = section("est_table")) {
    for (const auto& [key, node] : *sec) {
      std::stringstream ss(node.data());
      std::string profile;
      std::string y;
      std::string t;
      std::string value;
      std::string extra;
      if (!(ss >> profile >> y >> t >> value) || (ss >> extra)) {
        fail("est_table", key, "expected '<profile> <y> <T> <value>'");
      }
      try {
        cfg.est_table.set(profile, parse_value<double>("est_table", key, y),
                          parse_value<double>("est_table", key, t),
                          parse_value<double>("est_table", key, value));
      } catch (const std::invalid_argument& e) {
        fail("est_table", key, e.what());
      }
    }
  }
  if (auto* sec = section("thresholds")) {
    apply_section("thresholds", *sec,
                  {dbl("thresholds", "q_abort", s.thresholds.q_abort),
                   dbl("thresholds", "delta_max", s.thresholds.delta_max)});
  }
  if (auto* sec = section("run")) {
    apply_section("run", *sec,
                  {u32("run", "n_sim", s.n_sim),
                   {"seed", [&](const std::string& v) { s.seed = parse_value<std::uint64_t>("run", "seed", v); }}});
  }
  SweepSpec grid = default_sweep_spec(s);
  if (auto* sec = section("sweep")) {
    apply_section("sweep", *sec,
                  {{"r", [&](const std::string& v) { grid.r = parse_list<double>("sweep", "r", v); }},
                   {"n_ab", [&](const std::string& v) { grid.n_ab = parse_list<std::uint32_t>("sweep", "n_ab", v); }},
                   {"n_el", [&](const std::string& v) { grid.n_el = parse_list<std::uint32_t>("sweep", "n_el", v); }},
                   {"n_ss", [&](const std::string& v) { grid.n_ss = parse_list<std::uint32_t>("sweep", "n_ss", v); }}});
  }
  if (auto* sec = section("readout")) {
    ReadoutSettings& r = cfg.readout;
    apply_section("readout", *sec,
                  {dbl("readout", "mu_sig", r.mu_sig), u32("readout", "n_slots", r.n_slots),
                   dbl("readout", "visibility", r.model.visibility),
                   dbl("readout", "efficiency", r.model.efficiency),
                   dbl("readout", "electronic_noise_var", r.model.electronic_noise_var)});
  }
  if (auto* sec = section("budget")) {
    BudgetSettings& b = cfg.budget;
    apply_section("budget", *sec,
                  {{"mu_in", [&](const std::string& v) { b.mu_in = parse_value<double>("budget", "mu_in", v); }},
                   {"level_db", [&](const std::string& v) { b.level_db = parse_value<double>("budget", "level_db", v); }},
                   {"map", [&](const std::string& v) { b.map_path = trim(v); }}});
  }

  if (explicit_i_est) {
    s.i_est = *explicit_i_est;
  } else {
    try {
      s.i_est = cfg.est_table.lookup(s.profile.name, s.y, s.frame.t_channel);
    } catch (const UnsupportedScenario& e) {
      fail("protocol", "i_est", std::string("unsupported scenario: ") + e.what() +
                                    "; add an [est_table] entry or set i_est");
    }
  }
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  grid.base = s;
  cfg.sweep = grid;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace tqkd::cli
