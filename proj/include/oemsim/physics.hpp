#pragma once

#include <string>
#include <vector>

namespace oemsim {

/// Mechanical resonator. The damping rate is always derived from the
/// quality factor (kappa_m = omega_m / Q), never stored independently.
struct MechanicalParams {
  double omega_m = 0.0;         ///< angular frequency, rad/s
  double quality_factor = 0.0;  ///< dimensionless
  double mass = 0.0;            ///< kg
  double temperature = 0.0;     ///< environment temperature, K

  double kappa_m() const { return omega_m / quality_factor; }
};

/// Driven optical cavity.
struct OpticalParams {
  double drive_wavelength = 0.0;  ///< m
  double kappa_c = 0.0;           ///< amplitude decay rate, rad/s
  double drive_power = 0.0;       ///< W (zero means undriven)
  double cavity_length = 0.0;     ///< m
  double delta_c = 0.0;           ///< effective detuning, rad/s, signed
};

/// One driven microwave cavity. Cavities come in pairs with detunings of
/// equal magnitude and opposite sign; pair_id and sign record the pairing.
struct MicrowaveCavityParams {
  double omega_w = 0.0;      ///< resonance angular frequency, rad/s
  double kappa_w = 0.0;      ///< amplitude decay rate, rad/s
  double drive_power = 0.0;  ///< W (zero means undriven)
  double gap = 0.0;          ///< equilibrium plate separation, m
  double mu = 0.0;           ///< capacitance participation ratio, in (0,1)
  double delta_w = 0.0;      ///< effective detuning, rad/s, signed
  int pair_id = 0;           ///< 1-based pair label
  int sign = +1;             ///< +1 or -1 within the pair
};

/// Full network: one mechanical mode, one optical cavity, and an
/// even-length list of microwave cavities ordered
/// [pair1(+), pair1(-), pair2(+), pair2(-), ...].
struct SystemConfig {
  MechanicalParams mech;
  OpticalParams optical;
  std::vector<MicrowaveCavityParams> microwaves;
};

/// Closed-form quantities derived from a SystemConfig: linearized couplings,
/// thermal occupations, steady intracavity amplitudes, and the static
/// mechanical displacement they produce.
struct DerivedCouplings {
  double g_c = 0.0;                 ///< effective optomechanical coupling, rad/s
  std::vector<double> g_w;          ///< effective electromechanical couplings, rad/s
  double nbar_m = 0.0;              ///< mechanical thermal occupation
  std::vector<double> n_thermal_w;  ///< microwave thermal occupations
  double alpha_s = 0.0;             ///< steady optical amplitude magnitude
  std::vector<double> beta_s;       ///< steady microwave amplitude magnitudes
  double q_s = 0.0;                 ///< static displacement, zero-point units
  double g0_c = 0.0;                ///< single-photon optomechanical coupling, rad/s
  std::vector<double> g0_w;         ///< single-photon electromechanical couplings, rad/s
  double drive_c = 0.0;             ///< optical drive amplitude, 1/s
  std::vector<double> drive_w;      ///< microwave drive amplitudes, 1/s
};

/// Static cavity detunings before the mechanically induced shift;
/// reporting only, never fed back into the dynamics.
struct BareDetunings {
  double delta_0c = 0.0;
  std::vector<double> delta_0w;
};

/// Bose occupation 1/(exp(hbar*omega/kB*T) - 1); exactly 0 at T = 0.
/// Rejects non-finite input, omega <= 0, or T < 0.
double thermal_occupation(double omega, double temperature);

/// Computes all derived couplings for a validated config. Throws
/// validation_error when the config fails validation and numerical_error
/// if any derived quantity comes out non-finite.
DerivedCouplings derive_couplings(const SystemConfig& config);

/// delta_0 = delta + g0 * q_s for the optical and every microwave cavity.
BareDetunings bare_detunings(const SystemConfig& config,
                             const DerivedCouplings& derived);

/// Returns an empty list iff all type invariants hold; each violation
/// names the offending field and the invariant.
std::vector<std::string> validate_config(const SystemConfig& config);

/// Non-fatal advisories (low mechanical quality factor, pairs whose
/// detunings are not opposite). Kept separate from violations so sweeps
/// that deliberately break pair symmetry still validate.
std::vector<std::string> config_warnings(const SystemConfig& config);

}  // namespace oemsim
