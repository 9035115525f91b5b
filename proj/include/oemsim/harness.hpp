#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oemsim/matrix.hpp"
#include "oemsim/physics.hpp"

namespace oemsim {

enum class ScenarioId {
  fig2_detuning,             ///< identical-frequency pairs vs uniform detuning
  fig3_multifreq,            ///< 9/37.5/60 GHz pairs vs uniform detuning
  fig4_temperature,          ///< fixed detuning vs environment temperature
  fig5_detuning_coefficient, ///< per-pair detuning multiples vs coefficient
  custom
};

std::string to_string(ScenarioId id);
bool scenario_id_from_string(const std::string& text, ScenarioId& out);

/// Which model the temperature sweep runs on: three multi-frequency
/// pairs, or ten identical 9 GHz pairs.
enum class TemperatureModel { multifreq_3pair, identical_10pair };

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int points = 101;
  bool log_spaced = false;
};

struct Scenario {
  ScenarioId id = ScenarioId::custom;
  std::string name;  ///< human label recorded in CSV metadata
  SystemConfig base_config;
  AxisSpec axis;
  /// Microwave cavity index pairs (0-based list positions) to report.
  std::vector<std::pair<int, int>> observables;
};

struct SweepRow {
  double axis_value = 0.0;
  /// One E_N per observable; empty when the point is unstable or failed.
  std::vector<double> e_n;
  double spectral_abscissa = 0.0;
  bool stable = false;
  std::string note;  ///< failure description for solved-but-failed points
};

struct SweepResult {
  std::string scenario_name;
  std::string axis_name;
  bool axis_log_spaced = false;
  std::vector<std::string> observable_labels;
  std::vector<SweepRow> rows;  ///< sorted by axis value
  std::uint64_t config_hash = 0;
  std::string constants_version;
};

/// Reference parameter set: 10 MHz mechanical mode (Q = 5e4, 10 ng,
/// 15 mK), 1550 nm optical cavity (kappa_c = 0.08 omega_m, 30 mW, 1 mm,
/// delta_c = 0.5 omega_m), and the requested number of 9 GHz microwave
/// pairs (kappa_w = 0.02 omega_m, 30 mW, 100 nm gap, mu = 0.008,
/// delta_w = +/-0.5 omega_m).
SystemConfig baseline_config(int microwave_pairs = 1);

/// Detuning sweep over [-omega_m, omega_m] for identical 9 GHz pairs;
/// reports one opposite-detuning pair and one same-category pair.
Scenario scenario_fig2(int pair_count);

/// Detuning sweep for 9/37.5/60 GHz pairs; reports all within-pair
/// observables plus the cross-frequency combinations.
Scenario scenario_fig3();

/// Temperature sweep (1 mK to 250 mK, logarithmic) at fixed
/// delta_w = -0.1 omega_m for the chosen model.
Scenario scenario_fig4(TemperatureModel model = TemperatureModel::multifreq_3pair);

/// Detuning-coefficient sweep for two pairs with per-pair multiples
/// delta(pair p) = +/- p * DC * omega_m.
Scenario scenario_fig5();

/// Grid realizing an AxisSpec. Linear grids use the symmetric form
/// (min*(N-1-k) + max*k)/(N-1), which makes symmetric ranges mirror
/// exactly in floating point; log grids interpolate in log space.
std::vector<double> axis_grid(const AxisSpec& axis);

/// Applies one axis value to the scenario's base config.
SystemConfig materialize(const Scenario& scenario, double axis_value);

/// Materializes, validates, derives, builds, checks stability, and (when
/// stable) solves for the steady state and evaluates every observable.
/// Failures after the stability gate are captured in the row note rather
/// than thrown.
SweepRow evaluate_point(const Scenario& scenario, double axis_value);

/// Runs every axis point and assembles the table plus metadata. Rows come
/// out sorted by axis value; the result is a pure function of the
/// scenario, independent of evaluation order.
SweepResult run_sweep(const Scenario& scenario);

/// Tabular values below this threshold are reported as exactly zero.
inline constexpr double en_report_threshold = 1e-12;

/// Column label for a microwave cavity pair, e.g. "EN(w1+:w1-)".
std::string mode_pair_label(const SystemConfig& config, int cavity_a, int cavity_b);

/// CSV rendering: `# key: value` metadata lines, a mandatory header
/// `axis,<pair labels...>,spectral_abscissa,stable`, one row per axis
/// point with %.17g numbers; E_N cells of unstable points carry the
/// marker `unstable`. Byte-identical across repeated runs.
std::string csv_string(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);

/// Inverse of csv_string; numbers round-trip losslessly.
SweepResult parse_csv_string(const std::string& text);
SweepResult parse_csv(const std::string& path);

/// Static SVG rendering of the sweep: one polyline per observable,
/// derived entirely from the CSV data model.
std::string svg_string(const SweepResult& result);
void emit_svg_plot(const SweepResult& result, const std::string& path);

}  // namespace oemsim
