#pragma once

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "tqkd/evaluator.hpp"
#include "tqkd/optics_budget.hpp"

namespace tqkd::cli {

using Json = nlohmann::ordered_json;

/// Fixed decimal rendering with 9 significant digits.
std::string format_number(double v);

/// The value format_number would print, as a double.
double round9(double v);

Json scenario_json(const Scenario& s);
Json baseline_json(const BaselineResult& b);
Json run_result_json(const RunResult& r);

/// Header plus one row per result, NA for an undefined q or delta_b.
std::string results_csv(const std::vector<RunResult>& results);

/// slot,class,state,photons_at_bob,m0,m1,p0,p1,outcome
std::string trace_csv(const FrameTrace& trace);

struct BudgetRow {
  std::string label;
  double delay_ns = 0.0;
  double wavelength_nm = 0.0;
  double mu_in = 0.0;
  double level_db = 0.0;
  double mu_out = 0.0;
  double discrimination = 0.0;
};

std::vector<BudgetRow> budget_rows(double mu_in, const std::vector<ReflectionEntry>& entries);
std::string budget_csv(const std::vector<BudgetRow>& rows);
Json budget_json(const std::vector<BudgetRow>& rows);

/// JSON text with two-space indent and a trailing newline.
std::string dump(const Json& j);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tqkd::cli
