#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oemsim/config_io.hpp"
#include "oemsim/dynamics.hpp"
#include "oemsim/errors.hpp"
#include "oemsim/harness.hpp"
#include "oemsim/physics.hpp"

namespace {

struct RunOptions {
  std::string scenario;
  std::string config_path;
  std::string out_path;
  std::string svg_path;
  std::string model = "3pair";
  int pairs = 2;
  int points = 0;
};

oemsim::Scenario build_scenario(const RunOptions& options) {
  oemsim::ScenarioId id;
  if (!oemsim::scenario_id_from_string(options.scenario, id)) {
    throw oemsim::validation_error("unknown scenario \"" + options.scenario + "\"");
  }
  oemsim::Scenario scenario;
  switch (id) {
    case oemsim::ScenarioId::fig2_detuning:
      scenario = oemsim::scenario_fig2(options.pairs);
      break;
    case oemsim::ScenarioId::fig3_multifreq:
      scenario = oemsim::scenario_fig3();
      break;
    case oemsim::ScenarioId::fig4_temperature:
      scenario = oemsim::scenario_fig4(options.model == "10pair"
                                           ? oemsim::TemperatureModel::identical_10pair
                                           : oemsim::TemperatureModel::multifreq_3pair);
      break;
    case oemsim::ScenarioId::fig5_detuning_coefficient:
      scenario = oemsim::scenario_fig5();
      break;
    case oemsim::ScenarioId::custom: {
      if (options.config_path.empty()) {
        throw oemsim::validation_error("the custom scenario requires --config");
      }
      scenario.id = oemsim::ScenarioId::custom;
      scenario.name = "custom";
      scenario.base_config = oemsim::load_config_file(options.config_path);
      scenario.axis = {"delta_w", -1.0, 1.0, 101, false};
      const int n = static_cast<int>(scenario.base_config.microwaves.size());
      for (int p = 0; 2 * p + 1 < n; ++p) {
        scenario.observables.emplace_back(2 * p, 2 * p + 1);
      }
      break;
    }
  }
  if (id != oemsim::ScenarioId::custom && !options.config_path.empty()) {
    scenario.base_config = oemsim::load_config_file(options.config_path);
  }
  if (options.points > 0) {
    scenario.axis.points = options.points;
  }
  return scenario;
}

int run_command(const RunOptions& options) {
  const oemsim::Scenario scenario = build_scenario(options);
  {
    const auto problems = oemsim::validate_config(scenario.base_config);
    if (!problems.empty()) {
      for (const auto& problem : problems) {
        std::cerr << "invalid config: " << problem << '\n';
      }
      return 1;
    }
  }
  const oemsim::SweepResult result = oemsim::run_sweep(scenario);
  if (options.out_path.empty()) {
    std::cout << oemsim::csv_string(result);
  } else {
    oemsim::emit_csv(result, options.out_path);
    std::cout << "wrote " << options.out_path << '\n';
  }
  if (!options.svg_path.empty()) {
    oemsim::emit_svg_plot(result, options.svg_path);
    std::cout << "wrote " << options.svg_path << '\n';
  }
  return 0;
}

int validate_command(const std::string& path) {
  const oemsim::SystemConfig config = oemsim::load_config_file(path);
  const auto problems = oemsim::validate_config(config);
  if (!problems.empty()) {
    for (const auto& problem : problems) {
      std::cerr << "invalid: " << problem << '\n';
    }
    return 1;
  }
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "0x%016llx",
                static_cast<unsigned long long>(oemsim::config_hash(config)));
  std::cout << "config valid (hash " << hash_buf << ")\n";
  for (const auto& warning : oemsim::config_warnings(config)) {
    std::cout << "warning: " << warning << '\n';
  }
  return 0;
}

int stability_command(const std::string& path) {
  const oemsim::SystemConfig config = oemsim::load_config_file(path);
  {
    const auto problems = oemsim::validate_config(config);
    if (!problems.empty()) {
      for (const auto& problem : problems) {
        std::cerr << "invalid: " << problem << '\n';
      }
      return 1;
    }
  }
  const oemsim::DerivedCouplings derived = oemsim::derive_couplings(config);
  const oemsim::Matrix A = oemsim::build_drift(config, derived);
  const auto spectrum = oemsim::drift_spectrum(A);
  const oemsim::StabilityReport report =
      oemsim::stability_check(A, oemsim::StabilityMethod::both);
  std::cout << "drift eigenvalues (rad/s):\n";
  for (const auto& lambda : spectrum) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "  %+.9e %+.9ei\n", lambda.real(), lambda.imag());
    std::cout << buf;
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "spectral abscissa: %+.9e rad/s\n",
                report.spectral_abscissa);
  std::cout << buf;
  std::cout << "verdict: " << (report.is_stable ? "stable" : "unstable") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state entanglement sweeps for a linearized "
               "optoelectromechanical network"};
  app.require_subcommand(1);

  RunOptions run_options;
  CLI::App* run = app.add_subcommand("run", "run a sweep scenario, emit CSV and optional SVG");
  run->add_option("--scenario", run_options.scenario,
                  "one of fig2_detuning, fig3_multifreq, fig4_temperature, "
                  "fig5_detuning_coefficient, custom")
      ->required();
  run->add_option("--pairs", run_options.pairs,
                  "microwave pair count for fig2_detuning (default 2)")
      ->check(CLI::PositiveNumber);
  run->add_option("--model", run_options.model,
                  "fig4_temperature model: 3pair (multi-frequency) or 10pair")
      ->check(CLI::IsMember({"3pair", "10pair"}));
  run->add_option("--points", run_options.points, "axis point count override")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_options.out_path, "CSV output path (default: stdout)");
  run->add_option("--svg", run_options.svg_path, "SVG plot output path");
  run->add_option("--config", run_options.config_path,
                  "JSON config replacing the scenario's base parameters");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a JSON config");
  validate->add_option("--config", validate_path, "JSON config path")->required();

  std::string stability_path;
  CLI::App* stability =
      app.add_subcommand("stability", "print the drift spectrum and stability verdict");
  stability->add_option("--config", stability_path, "JSON config path")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(run_options);
    if (validate->parsed()) return validate_command(validate_path);
    if (stability->parsed()) return stability_command(stability_path);
    return 0;
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  } catch (const oemsim::validation_error& err) {
    std::cerr << "validation error: " << err.what() << '\n';
    return 1;
  } catch (const oemsim::numerical_error& err) {
    std::cerr << "numerical error: " << err.what() << '\n';
    return 2;
  } catch (const oemsim::io_error& err) {
    std::cerr << "I/O error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
