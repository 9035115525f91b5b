#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oemsim/constants.hpp"
#include "oemsim/errors.hpp"
#include "oemsim/harness.hpp"
#include "oemsim/physics.hpp"

using namespace oemsim;

namespace {

// Reference values computed with an independent implementation of the
// same closed-form expressions (64-bit floats, SciPy stack) on the
// baseline parameter set.
constexpr double ref_nbar_m = 30.757594904803614;
constexpr double ref_nbar_9ghz = 3.1209822823844177e-13;
constexpr double ref_g_c = 33949328.260789931;
constexpr double ref_g_c_over_omega = 0.54032034073540958;
constexpr double ref_g_w_plus_over_omega = 0.074614042979487705;
constexpr double ref_g_w_minus_over_omega = 0.074572602241506497;
constexpr double ref_alpha_s = 48216.885810865126;
constexpr double ref_beta_s = 3577296.4219540977;
constexpr double ref_drive_c = 1534044775414.6052;
constexpr double ref_drive_w = 112473952920347.33;
constexpr double ref_g0_c = 497.8712296786955;
constexpr double ref_g0_w = 0.92668154773570122;
constexpr double ref_q_s = 395689.35537298082;
constexpr double ref_shift_c = 197002345.9303163;
constexpr double ref_shift_w = 366678.02425957576;

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("thermal occupation matches the reference values") {
  const double omega_m = 2.0 * constants::pi * 10e6;
  CHECK(rel_diff(thermal_occupation(omega_m, 15e-3), ref_nbar_m) < 1e-13);
  CHECK(rel_diff(thermal_occupation(2.0 * constants::pi * 9e9, 15e-3),
                 ref_nbar_9ghz) < 1e-13);
}

TEST_CASE("thermal occupation limits") {
  CHECK(thermal_occupation(1e9, 0.0) == 0.0);
  CHECK(thermal_occupation(2.0 * constants::pi * 500e12, 1e-6) == 0.0);
  CHECK(thermal_occupation(1.0, 300.0) > 1e10);
}

TEST_CASE("thermal occupation rejects bad input") {
  CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), validation_error);
  CHECK_THROWS_AS(thermal_occupation(-1.0, 1.0), validation_error);
  CHECK_THROWS_AS(thermal_occupation(1.0, -1e-3), validation_error);
  CHECK_THROWS_AS(thermal_occupation(std::nan(""), 1.0), validation_error);
  CHECK_THROWS_AS(thermal_occupation(1.0, std::nan("")), validation_error);
}

TEST_CASE("derived couplings match the reference values on the baseline") {
  const SystemConfig config = baseline_config(1);
  const DerivedCouplings derived = derive_couplings(config);
  const double omega_m = config.mech.omega_m;

  CHECK(rel_diff(derived.g_c, ref_g_c) < 1e-12);
  CHECK(rel_diff(derived.g_c / omega_m, ref_g_c_over_omega) < 1e-12);
  REQUIRE(derived.g_w.size() == 2);
  CHECK(rel_diff(derived.g_w[0] / omega_m, ref_g_w_plus_over_omega) < 1e-12);
  CHECK(rel_diff(derived.g_w[1] / omega_m, ref_g_w_minus_over_omega) < 1e-12);
  CHECK(rel_diff(derived.nbar_m, ref_nbar_m) < 1e-13);
  CHECK(rel_diff(derived.n_thermal_w[0], ref_nbar_9ghz) < 1e-13);
  CHECK(rel_diff(derived.alpha_s, ref_alpha_s) < 1e-12);
  CHECK(rel_diff(derived.beta_s[0], ref_beta_s) < 1e-12);
  CHECK(rel_diff(derived.drive_c, ref_drive_c) < 1e-12);
  CHECK(rel_diff(derived.drive_w[0], ref_drive_w) < 1e-12);
  CHECK(rel_diff(derived.g0_c, ref_g0_c) < 1e-12);
  CHECK(rel_diff(derived.g0_w[0], ref_g0_w) < 1e-12);
  CHECK(rel_diff(derived.q_s, ref_q_s) < 1e-12);
}

TEST_CASE("effective optical coupling equals sqrt(2) g0 alpha_s") {
  const DerivedCouplings derived = derive_couplings(baseline_config(2));
  CHECK(rel_diff(derived.g_c, std::sqrt(2.0) * derived.g0_c * derived.alpha_s) < 1e-12);
  for (std::size_t j = 0; j < derived.g_w.size(); ++j) {
    CHECK(rel_diff(derived.g_w[j],
                   std::sqrt(2.0) * derived.g0_w[j] * derived.beta_s[j]) < 1e-12);
  }
}

TEST_CASE("microwave coupling is nearly but not exactly even in the detuning") {
  SystemConfig config = baseline_config(1);
  const DerivedCouplings derived = derive_couplings(config);
  // The detuning enters g_w via kappa^2 + delta^2 (even) and via the bare
  // resonance omega_w - delta_w (odd); the odd part is omega_m/omega_w
  // suppressed.
  const double asym = rel_diff(derived.g_w[0], derived.g_w[1]);
  CHECK(asym > 1e-6);
  CHECK(asym < 1e-3);
}

TEST_CASE("optical coupling ignores microwave detunings") {
  SystemConfig a = baseline_config(1);
  SystemConfig b = baseline_config(1);
  for (auto& mw : b.microwaves) mw.delta_w = -mw.delta_w;
  std::swap(b.microwaves[0].delta_w, b.microwaves[1].delta_w);
  CHECK(derive_couplings(a).g_c == derive_couplings(b).g_c);
}

TEST_CASE("undriven cavities carry zero coupling") {
  SystemConfig config = baseline_config(1);
  config.optical.drive_power = 0.0;
  config.microwaves[0].drive_power = 0.0;
  const DerivedCouplings derived = derive_couplings(config);
  CHECK(derived.g_c == 0.0);
  CHECK(derived.alpha_s == 0.0);
  CHECK(derived.g_w[0] == 0.0);
  CHECK(derived.g_w[1] > 0.0);
}

TEST_CASE("bare detunings add the static mechanical shift") {
  const SystemConfig config = baseline_config(1);
  const DerivedCouplings derived = derive_couplings(config);
  const BareDetunings bare = bare_detunings(config, derived);
  CHECK(rel_diff(bare.delta_0c, config.optical.delta_c + ref_shift_c) < 1e-10);
  CHECK(rel_diff(bare.delta_0w[0], config.microwaves[0].delta_w + ref_shift_w) < 1e-10);
  CHECK(rel_diff(bare.delta_0w[1], config.microwaves[1].delta_w + ref_shift_w) < 1e-10);
}

TEST_CASE("baseline configs validate cleanly") {
  for (int pairs : {1, 2, 3, 10}) {
    CHECK(validate_config(baseline_config(pairs)).empty());
  }
}

TEST_CASE("validation flags each broken field") {
  const auto violates = [](SystemConfig config, const char* token) {
    const auto v = validate_config(config);
    for (const auto& msg : v) {
      if (msg.find(token) != std::string::npos) return true;
    }
    return false;
  };

  SystemConfig config = baseline_config(1);
  config.mech.mass = -1e-12;
  CHECK(violates(config, "mech.mass"));

  config = baseline_config(1);
  config.mech.quality_factor = 0.0;
  CHECK(violates(config, "quality_factor"));

  config = baseline_config(1);
  config.mech.temperature = -1e-3;
  CHECK(violates(config, "temperature"));

  config = baseline_config(1);
  config.optical.kappa_c = -1.0;
  CHECK(violates(config, "kappa_c"));

  config = baseline_config(1);
  config.microwaves[0].mu = 1.0;
  CHECK(violates(config, "mu"));

  config = baseline_config(1);
  config.microwaves[1].delta_w = -config.microwaves[1].omega_w;
  CHECK(violates(config, "delta_w"));

  config = baseline_config(1);
  config.microwaves.pop_back();
  CHECK(violates(config, "even"));

  config = baseline_config(2);
  config.microwaves[2].pair_id = 7;
  CHECK(violates(config, "pair_id"));

  config = baseline_config(1);
  std::swap(config.microwaves[0].sign, config.microwaves[1].sign);
  CHECK(violates(config, "ordered"));

  config = baseline_config(1);
  config.microwaves[0].sign = 3;
  CHECK(violates(config, "sign"));
}

TEST_CASE("negative power and zero temperature") {
  SystemConfig config = baseline_config(1);
  config.optical.drive_power = -1.0;
  CHECK(!validate_config(config).empty());

  config = baseline_config(1);
  config.mech.temperature = 0.0;
  CHECK(validate_config(config).empty());
  CHECK(derive_couplings(config).nbar_m == 0.0);
}

TEST_CASE("derive_couplings throws on invalid configs") {
  SystemConfig config = baseline_config(1);
  config.mech.mass = 0.0;
  CHECK_THROWS_AS(derive_couplings(config), validation_error);
}

TEST_CASE("warnings flag low Q and non-opposite pair detunings") {
  SystemConfig config = baseline_config(1);
  CHECK(config_warnings(config).empty());

  config.mech.quality_factor = 50.0;
  CHECK(config_warnings(config).size() == 1);

  config = baseline_config(1);
  config.microwaves[1].delta_w = -0.4 * config.mech.omega_m;
  const auto warnings = config_warnings(config);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("not opposite") != std::string::npos);
}
