#include "oemsim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oemsim/config_io.hpp"
#include "oemsim/constants.hpp"
#include "oemsim/dynamics.hpp"
#include "oemsim/entanglement.hpp"
#include "oemsim/errors.hpp"
#include "oemsim/steady_state.hpp"

namespace oemsim {

namespace {

std::string g17(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& token, const std::string& where) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw io_error("sweep CSV: bad number \"" + token + "\" in " + where);
  }
  return value;
}

void validate_scenario(const Scenario& scenario) {
  std::vector<std::string> problems;
  const int cavities = static_cast<int>(scenario.base_config.microwaves.size());
  for (const auto& [a, b] : scenario.observables) {
    if (a < 0 || b < 0 || a >= cavities || b >= cavities || a == b) {
      problems.push_back("observable (" + std::to_string(a) + "," + std::to_string(b) +
                         ") does not name two distinct microwave cavities");
    }
  }
  if (!problems.empty()) {
    std::string joined = "scenario invalid:";
    for (const auto& p : problems) joined += " " + p + ";";
    throw validation_error(joined);
  }
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::fig2_detuning: return "fig2_detuning";
    case ScenarioId::fig3_multifreq: return "fig3_multifreq";
    case ScenarioId::fig4_temperature: return "fig4_temperature";
    case ScenarioId::fig5_detuning_coefficient: return "fig5_detuning_coefficient";
    case ScenarioId::custom: return "custom";
  }
  return "custom";
}

bool scenario_id_from_string(const std::string& text, ScenarioId& out) {
  static const std::pair<const char*, ScenarioId> table[] = {
      {"fig2_detuning", ScenarioId::fig2_detuning},
      {"fig3_multifreq", ScenarioId::fig3_multifreq},
      {"fig4_temperature", ScenarioId::fig4_temperature},
      {"fig5_detuning_coefficient", ScenarioId::fig5_detuning_coefficient},
      {"custom", ScenarioId::custom},
  };
  for (const auto& [name, id] : table) {
    if (text == name) {
      out = id;
      return true;
    }
  }
  return false;
}

SystemConfig baseline_config(int microwave_pairs) {
  if (microwave_pairs < 1) {
    throw validation_error("baseline_config: need at least one microwave pair");
  }
  const double omega_m = 2.0 * constants::pi * 10e6;

  SystemConfig config;
  config.mech.omega_m = omega_m;
  config.mech.quality_factor = 5e4;
  config.mech.mass = 10e-12;
  config.mech.temperature = 15e-3;

  config.optical.drive_wavelength = 1550e-9;
  config.optical.kappa_c = 0.08 * omega_m;
  config.optical.drive_power = 30e-3;
  config.optical.cavity_length = 1e-3;
  config.optical.delta_c = 0.5 * omega_m;

  for (int p = 0; p < microwave_pairs; ++p) {
    for (int s : {+1, -1}) {
      MicrowaveCavityParams cavity;
      cavity.omega_w = 2.0 * constants::pi * 9e9;
      cavity.kappa_w = 0.02 * omega_m;
      cavity.drive_power = 30e-3;
      cavity.gap = 100e-9;
      cavity.mu = 0.008;
      cavity.delta_w = s * 0.5 * omega_m;
      cavity.pair_id = p + 1;
      cavity.sign = s;
      config.microwaves.push_back(cavity);
    }
  }
  return config;
}

Scenario scenario_fig2(int pair_count) {
  if (pair_count < 1) {
    throw validation_error("scenario_fig2: need at least one microwave pair");
  }
  Scenario scenario;
  scenario.id = ScenarioId::fig2_detuning;
  scenario.name = "fig2_detuning_" + std::to_string(pair_count) + "pairs";
  scenario.base_config = baseline_config(pair_count);
  scenario.axis = {"delta_w", -1.0, 1.0, 101, false};
  scenario.observables.emplace_back(0, 1);
  if (pair_count >= 2) {
    scenario.observables.emplace_back(0, 2);
  }
  return scenario;
}

Scenario scenario_fig3() {
  Scenario scenario;
  scenario.id = ScenarioId::fig3_multifreq;
  scenario.name = "fig3_multifreq";
  scenario.base_config = baseline_config(3);
  const double pair_frequency[3] = {9e9, 37.5e9, 60e9};
  for (int j = 0; j < 6; ++j) {
    scenario.base_config.microwaves[j].omega_w =
        2.0 * constants::pi * pair_frequency[j / 2];
  }
  scenario.axis = {"delta_w", -1.0, 1.0, 101, false};
  scenario.observables = {{0, 1}, {2, 3}, {4, 5}, {0, 3}, {1, 2},
                          {2, 5}, {3, 4}, {0, 5}, {1, 4}, {0, 2}};
  return scenario;
}

Scenario scenario_fig4(TemperatureModel model) {
  Scenario scenario;
  scenario.id = ScenarioId::fig4_temperature;
  if (model == TemperatureModel::multifreq_3pair) {
    const Scenario fig3 = scenario_fig3();
    scenario.name = "fig4_temperature_3pair";
    scenario.base_config = fig3.base_config;
    scenario.observables = {{0, 1}, {2, 3}, {4, 5}};
  } else {
    scenario.name = "fig4_temperature_10pair";
    scenario.base_config = baseline_config(10);
    scenario.observables = {{0, 1}};
  }
  const double omega_m = scenario.base_config.mech.omega_m;
  for (auto& cavity : scenario.base_config.microwaves) {
    cavity.delta_w = cavity.sign * -0.1 * omega_m;
  }
  scenario.axis = {"temperature", 1e-3, 0.25, 101, true};
  return scenario;
}

Scenario scenario_fig5() {
  Scenario scenario;
  scenario.id = ScenarioId::fig5_detuning_coefficient;
  scenario.name = "fig5_detuning_coefficient";
  scenario.base_config = baseline_config(2);
  scenario.axis = {"dc", -1.0, 1.0, 101, false};
  scenario.observables = {{0, 1}, {0, 2}, {0, 3}};
  return scenario;
}

std::vector<double> axis_grid(const AxisSpec& axis) {
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
    throw validation_error("axis_grid: bounds must be finite");
  }
  if (axis.points < 2) {
    throw validation_error("axis_grid: need at least two points");
  }
  if (!(axis.min < axis.max)) {
    throw validation_error("axis_grid: min must lie below max");
  }
  if (axis.log_spaced && axis.min <= 0.0) {
    throw validation_error("axis_grid: log spacing needs positive bounds");
  }
  const int n = axis.points;
  const double lo = axis.log_spaced ? std::log(axis.min) : axis.min;
  const double hi = axis.log_spaced ? std::log(axis.max) : axis.max;
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k) {
    grid[k] = (lo * (n - 1 - k) + hi * k) / (n - 1);
  }
  if (axis.log_spaced) {
    for (double& value : grid) value = std::exp(value);
    grid.front() = axis.min;
    grid.back() = axis.max;
  }
  return grid;
}

SystemConfig materialize(const Scenario& scenario, double axis_value) {
  SystemConfig config = scenario.base_config;
  const double omega_m = config.mech.omega_m;
  if (scenario.axis.name == "delta_w") {
    for (auto& cavity : config.microwaves) {
      cavity.delta_w = cavity.sign * axis_value * omega_m;
    }
  } else if (scenario.axis.name == "temperature") {
    config.mech.temperature = axis_value;
  } else if (scenario.axis.name == "dc") {
    for (auto& cavity : config.microwaves) {
      cavity.delta_w = cavity.sign * cavity.pair_id * axis_value * omega_m;
    }
  } else {
    throw validation_error("materialize: unsupported axis \"" + scenario.axis.name + "\"");
  }
  return config;
}

SweepRow evaluate_point(const Scenario& scenario, double axis_value) {
  const SystemConfig config = materialize(scenario, axis_value);
  const DerivedCouplings derived = derive_couplings(config);
  const Matrix A = build_drift(config, derived);
  const Vector D = build_diffusion(config, derived);

  SweepRow row;
  row.axis_value = axis_value;
  const StabilityReport report = stability_check(A, StabilityMethod::eigenvalue);
  row.spectral_abscissa = report.spectral_abscissa;
  row.stable = report.is_stable;
  if (!row.stable) {
    return row;
  }
  try {
    const LyapunovSolution solution = solve_lyapunov(A, D, LyapunovBackend::vectorized);
    row.e_n.reserve(scenario.observables.size());
    for (const auto& [a, b] : scenario.observables) {
      const EntanglementResult result = log_negativity(
          reduce_cm(solution.V, ModeIndex::microwave(a), ModeIndex::microwave(b)));
      row.e_n.push_back(result.e_n < en_report_threshold ? 0.0 : result.e_n);
    }
  } catch (const std::exception& err) {
    row.e_n.clear();
    row.note = err.what();
  }
  return row;
}

SweepResult run_sweep(const Scenario& scenario) {
  validate_scenario(scenario);
  SweepResult out;
  out.scenario_name = scenario.name;
  out.axis_name = scenario.axis.name;
  out.axis_log_spaced = scenario.axis.log_spaced;
  for (const auto& [a, b] : scenario.observables) {
    out.observable_labels.push_back(mode_pair_label(scenario.base_config, a, b));
  }
  out.config_hash = config_hash(scenario.base_config);
  out.constants_version = constants::version_tag;
  for (double value : axis_grid(scenario.axis)) {
    out.rows.push_back(evaluate_point(scenario, value));
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return a.axis_value < b.axis_value;
                   });
  return out;
}

std::string mode_pair_label(const SystemConfig& config, int cavity_a, int cavity_b) {
  const int n = static_cast<int>(config.microwaves.size());
  if (cavity_a < 0 || cavity_b < 0 || cavity_a >= n || cavity_b >= n) {
    throw validation_error("mode_pair_label: cavity index out of range");
  }
  const auto& a = config.microwaves[cavity_a];
  const auto& b = config.microwaves[cavity_b];
  char buf[64];
  std::snprintf(buf, sizeof buf, "EN(w%d%c:w%d%c)", a.pair_id, a.sign >= 0 ? '+' : '-',
                b.pair_id, b.sign >= 0 ? '+' : '-');
  return buf;
}

std::string csv_string(const SweepResult& result) {
  std::ostringstream out;
  out << "# scenario: " << result.scenario_name << '\n';
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "0x%016llx",
                static_cast<unsigned long long>(result.config_hash));
  out << "# config_hash: " << hash_buf << '\n';
  out << "# constants: " << result.constants_version << '\n';
  out << "# axis: " << result.axis_name << '\n';
  out << "# axis_scale: " << (result.axis_log_spaced ? "log" : "linear") << '\n';
  out << "axis";
  for (const auto& label : result.observable_labels) {
    out << ',' << label;
  }
  out << ",spectral_abscissa,stable\n";
  const std::size_t columns = result.observable_labels.size();
  for (const auto& row : result.rows) {
    out << g17(row.axis_value);
    const bool solved = row.stable && row.e_n.size() == columns;
    for (std::size_t i = 0; i < columns; ++i) {
      out << ',';
      if (!row.stable) {
        out << "unstable";
      } else if (!solved) {
        out << "error";
      } else {
        out << g17(row.e_n[i]);
      }
    }
    out << ',' << g17(row.spectral_abscissa) << ',' << (row.stable ? '1' : '0') << '\n';
  }
  return out.str();
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error("cannot open CSV output file: " + path);
  }
  out << csv_string(result);
  out.flush();
  if (!out) {
    throw io_error("failed writing CSV output file: " + path);
  }
}

SweepResult parse_csv_string(const std::string& text) {
  SweepResult result;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '#') {
      const std::size_t colon = line.find(": ");
      if (colon == std::string::npos) {
        throw io_error("sweep CSV: malformed metadata on " + where);
      }
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "scenario") {
        result.scenario_name = value;
      } else if (key == "config_hash") {
        result.config_hash = std::strtoull(value.c_str(), nullptr, 16);
      } else if (key == "constants") {
        result.constants_version = value;
      } else if (key == "axis") {
        result.axis_name = value;
      } else if (key == "axis_scale") {
        result.axis_log_spaced = value == "log";
      } else {
        throw io_error("sweep CSV: unknown metadata key \"" + key + "\"");
      }
      continue;
    }
    const std::vector<std::string> cells = split(line, ',');
    if (!have_header) {
      if (cells.size() < 3 || cells.front() != "axis" ||
          cells[cells.size() - 2] != "spectral_abscissa" || cells.back() != "stable") {
        throw io_error("sweep CSV: malformed header on " + where);
      }
      result.observable_labels.assign(cells.begin() + 1, cells.end() - 2);
      have_header = true;
      continue;
    }
    if (cells.size() != result.observable_labels.size() + 3) {
      throw io_error("sweep CSV: wrong column count on " + where);
    }
    SweepRow row;
    row.axis_value = parse_number(cells.front(), where);
    row.spectral_abscissa = parse_number(cells[cells.size() - 2], where);
    if (cells.back() == "1") {
      row.stable = true;
    } else if (cells.back() == "0") {
      row.stable = false;
    } else {
      throw io_error("sweep CSV: bad stable flag on " + where);
    }
    bool failed = false;
    std::vector<double> values;
    for (std::size_t i = 1; i + 2 < cells.size(); ++i) {
      if (cells[i] == "unstable" || cells[i] == "error") {
        failed = true;
      } else {
        values.push_back(parse_number(cells[i], where));
      }
    }
    if (!failed) {
      row.e_n = std::move(values);
    } else if (row.stable) {
      row.note = "error";
    }
    result.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw io_error("sweep CSV: missing header row");
  }
  return result;
}

SweepResult parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open CSV file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw io_error("failed reading CSV file: " + path);
  }
  return parse_csv_string(buffer.str());
}

}  // namespace oemsim
