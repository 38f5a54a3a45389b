#include "cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tqkd::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round9(double v) { return std::stod(format_number(v)); }

namespace {

Json num(double v) { return round9(v); }

Json opt(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

std::string csv_opt(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

Json detector_json(const DetectorParams& p) {
  return Json{{"eta", num(p.eta)},         {"dark", num(p.dark)},       {"ap_amp1", num(p.ap_amp1)},
              {"ap_tau1", num(p.ap_tau1)}, {"ap_amp2", num(p.ap_amp2)}, {"ap_tau2", num(p.ap_tau2)}};
}

}  // namespace

Json scenario_json(const Scenario& s) {
  return Json{
      {"name", s.name},
      {"profile",
       {{"name", s.profile.name},
        {"afterpulse_scale", num(s.profile.afterpulse_scale)},
        {"d0", detector_json(s.profile.d0)},
        {"d1", detector_json(s.profile.d1)}}},
      {"channel",
       {{"t", num(s.frame.t_channel)},
        {"t_bob", num(s.frame.t_bob)},
        {"mu", num(s.frame.mean_photon_number())},
        {"n_slots", s.frame.n_slots},
        {"slot_period_us", num(s.frame.slot_period_us)},
        {"deadtime_gates", s.frame.deadtime_gates}}},
      {"attack",
       {{"r", num(s.attack.r)},
        {"n_ab", s.attack.triad.n_ab},
        {"n_el", s.attack.triad.n_el},
        {"n_ss", s.attack.triad.n_ss},
        {"t_ll", num(s.attack.t_ll)},
        {"mu_eb", num(s.attack.mu_eb)},
        {"readout_error", num(s.attack.readout_error)}}},
      {"protocol",
       {{"y", num(s.y)},
        {"i_est", num(s.i_est)},
        {"info_model", s.info_model == EveInfoModel::kKnownOnly ? "known-only" : "known-plus-leakage"}}},
      {"thresholds", {{"q_abort", num(s.thresholds.q_abort)}, {"delta_max", num(s.thresholds.delta_max)}}},
      {"n_sim", s.n_sim},
      {"seed", s.seed},
  };
}

Json baseline_json(const BaselineResult& b) {
  return Json{{"gamma_exp", num(b.gamma_exp)}, {"gamma_se", num(b.gamma_se)}, {"q", opt(b.q)},
              {"q_se", num(b.q_se)},           {"clicks", b.clicks},          {"conclusive", b.conclusive},
              {"errors", b.errors},            {"n_sim", b.n_sim}};
}

Json run_result_json(const RunResult& r) {
  return Json{
      {"r", num(r.r)},
      {"n_ab", r.triad.n_ab},
      {"n_el", r.triad.n_el},
      {"n_ss", r.triad.n_ss},
      {"status", std::string(to_string(r.status))},
      {"message", r.message},
      {"q", opt(r.q)},
      {"q_se", num(r.q_se)},
      {"gamma_obs", num(r.gamma_obs)},
      {"gamma_obs_se", num(r.gamma_obs_se)},
      {"gamma_exp", num(r.gamma_exp)},
      {"delta_b", opt(r.delta_b)},
      {"f_known", num(r.f_known)},
      {"f_known_se", num(r.f_known_se)},
      {"i_act", num(r.i_act)},
      {"i_est", num(r.i_est)},
      {"conditions",
       {{"qber_below_abort", r.conditions.qber_below_abort},
        {"rate_within_tolerance", r.conditions.rate_within_tolerance},
        {"info_exceeds_estimate", r.conditions.info_exceeds_estimate}}},
      {"feasible", r.feasible},
      {"diagnostics",
       {{"attacked_frames", r.diagnostics.attacked_frames},
        {"clicks", r.diagnostics.clicks},
        {"conclusive", r.diagnostics.conclusive},
        {"errors", r.diagnostics.errors},
        {"known", r.diagnostics.known},
        {"double_clicks", r.diagnostics.double_clicks},
        {"withdrawn_gates", r.diagnostics.withdrawn_gates}}},
  };
}

std::string results_csv(const std::vector<RunResult>& results) {
  std::ostringstream out;
  out << "r,n_ab,n_el,n_ss,q,gamma_obs,gamma_exp,delta_b,f_known,i_act,i_est,feasible\n";
  for (const auto& r : results) {
    out << format_number(r.r) << ',' << r.triad.n_ab << ',' << r.triad.n_el << ',' << r.triad.n_ss << ','
        << csv_opt(r.q) << ',' << format_number(r.gamma_obs) << ',' << format_number(r.gamma_exp) << ','
        << csv_opt(r.delta_b) << ',' << format_number(r.f_known) << ',' << format_number(r.i_act) << ','
        << format_number(r.i_est) << ',' << (r.feasible ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string trace_csv(const FrameTrace& t) {
  std::ostringstream out;
  out << "slot,class,state,photons_at_bob,m0,m1,p0,p1,outcome\n";
  for (std::uint32_t i = 0; i < t.at_alice.size(); ++i) {
    out << i + 1 << ',' << to_string(t.pattern.classes[i]) << ',' << to_string(t.at_alice.states[i]) << ','
        << t.at_bob.photons[i] << ',' << t.counts.m0[i] << ',' << t.counts.m1[i] << ','
        << format_number(t.p[0][i]) << ',' << format_number(t.p[1][i]) << ','
        << to_string(t.clicks.outcomes[i]) << '\n';
  }
  return out.str();
}

std::vector<BudgetRow> budget_rows(double mu_in, const std::vector<ReflectionEntry>& entries) {
  std::vector<BudgetRow> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) {
    const double mu_out = back_reflection_mu(mu_in, e.level_db);
    rows.push_back({e.label, e.delay_ns, e.wavelength_nm, mu_in, e.level_db, mu_out,
                    max_discrimination_prob(mu_out)});
  }
  return rows;
}

std::string budget_csv(const std::vector<BudgetRow>& rows) {
  std::ostringstream out;
  out << "label,delay_ns,wavelength_nm,mu_in,level_db,mu_out,discrimination\n";
  for (const auto& r : rows) {
    std::string label = r.label;
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      label = quoted + "\"";
    }
    out << label << ',' << format_number(r.delay_ns) << ',' << format_number(r.wavelength_nm) << ','
        << format_number(r.mu_in) << ',' << format_number(r.level_db) << ',' << format_number(r.mu_out) << ','
        << format_number(r.discrimination) << '\n';
  }
  return out.str();
}

Json budget_json(const std::vector<BudgetRow>& rows) {
  Json entries = Json::array();
  for (const auto& r : rows) {
    entries.push_back(Json{{"label", r.label},
                           {"delay_ns", num(r.delay_ns)},
                           {"wavelength_nm", num(r.wavelength_nm)},
                           {"mu_in", num(r.mu_in)},
                           {"level_db", num(r.level_db)},
                           {"mu_out", num(r.mu_out)},
                           {"discrimination", num(r.discrimination)}});
  }
  Json floors = Json::array();
  for (const auto& f : reflectometer_floors()) {
    floors.push_back(Json{{"wavelength_nm", num(f.wavelength_nm)}, {"level_db", num(f.level_db)}});
  }
  return Json{{"entries", entries}, {"reflectometer_floors", floors}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace tqkd::cli
