#include "tqkd/optics_budget.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tqkd {

std::vector<ReflectionEntry> default_reflection_map() {
  return {{43.0, -57.0, "PM input connector", 1550.0}};
}

std::vector<SensitivityFloor> reflectometer_floors() { return {{1550.0, -83.0}, {806.0, -96.0}}; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line, const char* name) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw std::invalid_argument("reflection map line " + std::to_string(line) + ": bad " + name +
                                " '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<ReflectionEntry> load_reflection_map(std::istream& in) {
  std::vector<ReflectionEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (line_no == 1 && !fields.empty() && fields[0] == "delay_ns") continue;
    if (fields.size() != 4) {
      throw std::invalid_argument("reflection map line " + std::to_string(line_no) +
                                  ": expected 4 fields, got " + std::to_string(fields.size()));
    }
    ReflectionEntry e;
    e.delay_ns = parse_number(fields[0], line_no, "delay_ns");
    e.level_db = parse_number(fields[1], line_no, "level_db");
    e.label = fields[2];
    e.wavelength_nm = parse_number(fields[3], line_no, "wavelength_nm");
    if (e.level_db > 0.0 || e.delay_ns < 0.0) {
      throw std::invalid_argument("reflection map line " + std::to_string(line_no) +
                                  ": level must be <= 0 dB and delay >= 0");
    }
    out.push_back(std::move(e));
  }
  return out;
}

double back_reflection_mu(double mu_in, double level_db) {
  if (level_db > 0.0) throw std::domain_error("reflection level must be <= 0 dB");
  if (!(mu_in >= 0.0)) throw std::domain_error("input mean photon number must be >= 0");
  return mu_in * std::pow(10.0, level_db / 10.0);
}

double max_discrimination_prob(double mu) {
  if (!(mu >= 0.0)) throw std::domain_error("mean photon number must be >= 0");
  return -std::expm1(-mu);
}

void validate(const HomodyneModel& m) {
  if (!(m.visibility >= 0.0 && m.visibility <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1]");
  if (!(m.efficiency >= 0.0 && m.efficiency <= 1.0)) throw std::invalid_argument("efficiency must lie in [0, 1]");
  if (!(m.electronic_noise_var >= 0.0)) throw std::invalid_argument("electronic noise variance must be >= 0");
}

namespace {

double quadrature_mean(double mu_sig, const HomodyneModel& m) {
  return std::sqrt(m.efficiency * m.visibility * m.visibility * mu_sig);
}

double quadrature_sigma(const HomodyneModel& m) {
  return std::sqrt(kVacuumQuadratureVariance + m.electronic_noise_var);
}

}  // namespace

double homodyne_error_prob(double mu_sig, const HomodyneModel& model) {
  if (!(mu_sig >= 0.0)) throw std::domain_error("signal mean photon number must be >= 0");
  validate(model);
  const double z = quadrature_mean(mu_sig, model) / quadrature_sigma(model);
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double electronic_noise_for_error(double mu_sig, double target_error, HomodyneModel base) {
  base.electronic_noise_var = 0.0;
  const double floor = homodyne_error_prob(mu_sig, base);
  if (!(target_error >= floor && target_error < 0.5)) {
    throw std::domain_error("target error must lie in [noiseless error, 0.5)");
  }
  double lo = 0.0;
  double hi = 1.0;
  auto err = [&](double v) {
    base.electronic_noise_var = v;
    return homodyne_error_prob(mu_sig, base);
  };
  while (err(hi) < target_error) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (err(mid) < target_error ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PhaseReadout simulate_phase_readout(std::span<const std::uint8_t> bob_bits, double mu_sig,
                                    const HomodyneModel& model, RandomStream& rng) {
  if (!(mu_sig >= 0.0)) throw std::domain_error("signal mean photon number must be >= 0");
  validate(model);
  const double mean = quadrature_mean(mu_sig, model);
  const double sigma = quadrature_sigma(model);
  PhaseReadout out;
  out.estimated_bits.resize(bob_bits.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < bob_bits.size(); ++i) {
    const double x = (bob_bits[i] == 0 ? mean : -mean) + sigma * rng.normal();
    // A sample exactly at zero reads as bit 0.
    out.estimated_bits[i] = x < 0.0 ? 1 : 0;
    correct += out.estimated_bits[i] == bob_bits[i] ? 1 : 0;
  }
  out.correlation = bob_bits.empty() ? 0.0 : static_cast<double>(correct) / bob_bits.size();
  return out;
}

}  // namespace tqkd
