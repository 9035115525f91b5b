#include "oemsim/physics.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>

#include "oemsim/constants.hpp"
#include "oemsim/errors.hpp"

namespace oemsim {

namespace {

std::string field(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

}  // namespace

double thermal_occupation(double omega, double temperature) {
  if (!std::isfinite(omega) || !std::isfinite(temperature)) {
    throw validation_error("thermal_occupation: non-finite input");
  }
  if (omega <= 0.0) {
    throw validation_error("thermal_occupation: omega must be positive");
  }
  if (temperature < 0.0) {
    throw validation_error("thermal_occupation: temperature must be non-negative");
  }
  if (temperature == 0.0) {
    return 0.0;
  }
  const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
  // expm1 overflows to +inf for large x; 1/inf decays cleanly to 0.
  return 1.0 / std::expm1(x);
}

DerivedCouplings derive_couplings(const SystemConfig& config) {
  {
    auto violations = validate_config(config);
    if (!violations.empty()) {
      std::string msg = "derive_couplings: invalid config:";
      for (const auto& v : violations) msg += "\n  " + v;
      throw validation_error(msg);
    }
  }

  const auto& mech = config.mech;
  const auto& opt = config.optical;
  const double omega_m = mech.omega_m;
  const double zero_point = std::sqrt(constants::hbar / (mech.mass * omega_m));

  DerivedCouplings out;
  out.nbar_m = thermal_occupation(omega_m, mech.temperature);

  const double omega_0c = 2.0 * constants::pi * constants::c_light / opt.drive_wavelength;
  const double omega_c = omega_0c + opt.delta_c;
  const double lorentz_c = opt.kappa_c * opt.kappa_c + opt.delta_c * opt.delta_c;
  out.drive_c = std::sqrt(2.0 * opt.drive_power * opt.kappa_c / (constants::hbar * omega_0c));
  out.alpha_s = out.drive_c / std::sqrt(lorentz_c);
  out.g0_c = (omega_c / opt.cavity_length) * zero_point;
  out.g_c = (2.0 * omega_c / opt.cavity_length) *
            std::sqrt(opt.drive_power * opt.kappa_c /
                      (mech.mass * omega_m * omega_0c * lorentz_c));

  const auto n = config.microwaves.size();
  out.g_w.reserve(n);
  out.n_thermal_w.reserve(n);
  out.beta_s.reserve(n);
  out.g0_w.reserve(n);
  out.drive_w.reserve(n);
  double displacement_sum = out.g0_c * out.alpha_s * out.alpha_s;
  for (const auto& mw : config.microwaves) {
    const double omega_0w = mw.omega_w - mw.delta_w;
    const double lorentz_w = mw.kappa_w * mw.kappa_w + mw.delta_w * mw.delta_w;
    const double drive = std::sqrt(2.0 * mw.drive_power * mw.kappa_w /
                                   (constants::hbar * omega_0w));
    const double beta = drive / std::sqrt(lorentz_w);
    const double g0 = (mw.mu * mw.omega_w / (2.0 * mw.gap)) * zero_point;
    const double g = (mw.mu * mw.omega_w / mw.gap) *
                     std::sqrt(mw.drive_power * mw.kappa_w /
                               (mech.mass * omega_m * omega_0w * lorentz_w));
    out.drive_w.push_back(drive);
    out.beta_s.push_back(beta);
    out.g0_w.push_back(g0);
    out.g_w.push_back(g);
    out.n_thermal_w.push_back(thermal_occupation(mw.omega_w, mech.temperature));
    displacement_sum += g0 * beta * beta;
  }
  out.q_s = displacement_sum / omega_m;

  bool finite = std::isfinite(out.g_c) && std::isfinite(out.alpha_s) &&
                std::isfinite(out.q_s) && std::isfinite(out.nbar_m);
  for (std::size_t j = 0; j < n && finite; ++j) {
    finite = std::isfinite(out.g_w[j]) && std::isfinite(out.beta_s[j]) &&
             std::isfinite(out.n_thermal_w[j]);
  }
  if (!finite) {
    throw numerical_error("derive_couplings: non-finite derived quantity");
  }
  return out;
}

BareDetunings bare_detunings(const SystemConfig& config,
                             const DerivedCouplings& derived) {
  BareDetunings out;
  out.delta_0c = config.optical.delta_c + derived.g0_c * derived.q_s;
  out.delta_0w.reserve(config.microwaves.size());
  for (std::size_t j = 0; j < config.microwaves.size(); ++j) {
    out.delta_0w.push_back(config.microwaves[j].delta_w +
                           derived.g0_w[j] * derived.q_s);
  }
  return out;
}

std::vector<std::string> validate_config(const SystemConfig& config) {
  std::vector<std::string> v;
  const auto& mech = config.mech;
  if (!(mech.omega_m > 0.0) || !std::isfinite(mech.omega_m)) {
    v.push_back(field("mech.omega_m: must be positive and finite, got %g", mech.omega_m));
  }
  if (!(mech.quality_factor > 0.0) || !std::isfinite(mech.quality_factor)) {
    v.push_back(field("mech.quality_factor: must be positive and finite, got %g",
                      mech.quality_factor));
  }
  if (!(mech.mass > 0.0) || !std::isfinite(mech.mass)) {
    v.push_back(field("mech.mass: must be positive and finite, got %g", mech.mass));
  }
  if (mech.temperature < 0.0 || !std::isfinite(mech.temperature)) {
    v.push_back(field("mech.temperature: must be non-negative and finite, got %g",
                      mech.temperature));
  }

  const auto& opt = config.optical;
  if (!(opt.drive_wavelength > 0.0) || !std::isfinite(opt.drive_wavelength)) {
    v.push_back(field("optical.drive_wavelength: must be positive and finite, got %g",
                      opt.drive_wavelength));
  }
  if (!(opt.kappa_c > 0.0) || !std::isfinite(opt.kappa_c)) {
    v.push_back(field("optical.kappa_c: must be positive and finite, got %g", opt.kappa_c));
  }
  if (opt.drive_power < 0.0 || !std::isfinite(opt.drive_power)) {
    v.push_back(field("optical.drive_power: must be non-negative and finite, got %g",
                      opt.drive_power));
  }
  if (!(opt.cavity_length > 0.0) || !std::isfinite(opt.cavity_length)) {
    v.push_back(field("optical.cavity_length: must be positive and finite, got %g",
                      opt.cavity_length));
  }
  if (!std::isfinite(opt.delta_c)) {
    v.push_back("optical.delta_c: must be finite");
  }

  const auto n = config.microwaves.size();
  if (n < 2 || n % 2 != 0) {
    v.push_back(field("microwaves: cavity count must be even and >= 2, got %zu", n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& mw = config.microwaves[j];
    const auto name = "microwaves[" + std::to_string(j) + "]";
    if (!(mw.omega_w > 0.0) || !std::isfinite(mw.omega_w)) {
      v.push_back(field("%s.omega_w: must be positive and finite, got %g",
                        name.c_str(), mw.omega_w));
    }
    if (!(mw.kappa_w > 0.0) || !std::isfinite(mw.kappa_w)) {
      v.push_back(field("%s.kappa_w: must be positive and finite, got %g",
                        name.c_str(), mw.kappa_w));
    }
    if (mw.drive_power < 0.0 || !std::isfinite(mw.drive_power)) {
      v.push_back(field("%s.drive_power: must be non-negative and finite, got %g",
                        name.c_str(), mw.drive_power));
    }
    if (!(mw.gap > 0.0) || !std::isfinite(mw.gap)) {
      v.push_back(field("%s.gap: must be positive and finite, got %g",
                        name.c_str(), mw.gap));
    }
    if (!(mw.mu > 0.0 && mw.mu < 1.0)) {
      v.push_back(field("%s.mu: must lie in (0,1), got %g", name.c_str(), mw.mu));
    }
    if (!std::isfinite(mw.delta_w) || std::abs(mw.delta_w) >= mw.omega_w) {
      v.push_back(field("%s.delta_w: magnitude must stay below the resonance frequency",
                        name.c_str()));
    }
    if (mw.sign != 1 && mw.sign != -1) {
      v.push_back(field("%s.sign: must be +1 or -1, got %d", name.c_str(), mw.sign));
    }
  }
  // Ordering convention: [pair1(+), pair1(-), pair2(+), pair2(-), ...].
  if (n >= 2 && n % 2 == 0) {
    for (std::size_t p = 0; p < n / 2; ++p) {
      const auto& a = config.microwaves[2 * p];
      const auto& b = config.microwaves[2 * p + 1];
      const int expected = static_cast<int>(p) + 1;
      if (a.pair_id != expected || b.pair_id != expected) {
        v.push_back(field("microwaves: entries %zu,%zu must carry pair_id %d",
                          2 * p, 2 * p + 1, expected));
      }
      if (a.sign != +1 || b.sign != -1) {
        v.push_back(field("microwaves: pair %d must be ordered (+1, -1)", expected));
      }
    }
  }
  return v;
}

std::vector<std::string> config_warnings(const SystemConfig& config) {
  std::vector<std::string> w;
  if (config.mech.quality_factor > 0.0 && config.mech.quality_factor < 100.0) {
    w.push_back(field(
        "mech.quality_factor = %g is low; the weak-damping noise model assumes Q >> 1",
        config.mech.quality_factor));
  }
  const auto n = config.microwaves.size();
  for (std::size_t p = 0; 2 * p + 1 < n; ++p) {
    const auto& a = config.microwaves[2 * p];
    const auto& b = config.microwaves[2 * p + 1];
    const double scale = std::max({std::abs(a.delta_w), std::abs(b.delta_w), 1.0});
    if (std::abs(a.delta_w + b.delta_w) > 1e-9 * scale) {
      w.push_back(field("pair %d detunings are not opposite (%g vs %g)",
                        a.pair_id, a.delta_w, b.delta_w));
    }
  }
  return w;
}

}  // namespace oemsim
