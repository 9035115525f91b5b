// Acceptance gate for the simulator. Each criterion prints one PASS or
// FAIL line with measured numbers; the binary exits nonzero if any
// criterion fails. Tolerances are pinned here, next to the checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oemsim/config_io.hpp"
#include "oemsim/dynamics.hpp"
#include "oemsim/entanglement.hpp"
#include "oemsim/harness.hpp"
#include "oemsim/physics.hpp"
#include "oemsim/steady_state.hpp"

using namespace oemsim;

namespace {

constexpr double residual_limit = 1e-9;
constexpr double backend_agreement_limit = 1e-8;
constexpr double residual_budget_s = 10.0;

constexpr double ode_match_limit = 1e-4;
constexpr double quadrature_match_limit = 1e-3;
constexpr double oracle_budget_s = 30.0;
/// Entrywise comparison floor, as a fraction of the largest entry.
constexpr double entry_floor_fraction = 1e-3;

constexpr double tmsv_limit = 1e-10;
constexpr double physicality_floor = 0.5 - 1e-9;

constexpr double evenness_limit = 1e-9;
constexpr double cross_category_limit = 1e-10;
constexpr double mirror_limit = 1e-9;
constexpr double monotonic_slack = 1e-12;
constexpr double sweep_budget_s = 60.0;

int failures = 0;

void report(int number, const char* title, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", number, title,
              detail.c_str());
  if (!ok) ++failures;
}

void run_criterion(int number, const char* title,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(number, title, ok, detail);
  } catch (const std::exception& err) {
    report(number, title, false, std::string("exception: ") + err.what());
  }
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct NamedConfig {
  std::string name;
  SystemConfig config;
};

std::vector<NamedConfig> scenario_configs() {
  return {
      {"fig2/2 pairs", materialize(scenario_fig2(2), 0.5)},
      {"fig2/5 pairs", materialize(scenario_fig2(5), 0.5)},
      {"fig2/10 pairs", materialize(scenario_fig2(10), 0.5)},
      {"fig3", materialize(scenario_fig3(), 0.5)},
      {"fig4/3 pairs", materialize(scenario_fig4(TemperatureModel::multifreq_3pair), 15e-3)},
      {"fig4/10 pairs", materialize(scenario_fig4(TemperatureModel::identical_10pair), 15e-3)},
      {"fig5", materialize(scenario_fig5(), 0.5)},
  };
}

struct BuiltSystem {
  Matrix A;
  Vector d;
};

BuiltSystem build_system(const SystemConfig& config) {
  const DerivedCouplings derived = derive_couplings(config);
  return {build_drift(config, derived), build_diffusion(config, derived)};
}

Matrix random_square(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix R(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      R(i, j) = u(rng);
    }
  }
  return R;
}

/// Shifts the diagonal so the spectral abscissa lands on `target`.
Matrix with_abscissa(const Matrix& R, double target) {
  const double abscissa = stability_check(R).spectral_abscissa;
  return R - (abscissa - target) * Matrix::Identity(R.rows(), R.cols());
}

Matrix random_spd(std::mt19937& rng, int n) {
  const Matrix B = random_square(rng, n);
  return B * B.transpose() + 1e-3 * Matrix::Identity(n, n);
}

double lyapunov_relative_residual(const Matrix& A, const Matrix& V, const Matrix& D) {
  const double numerator = (A * V + V * A.transpose() + D).norm();
  return numerator / (2.0 * A.norm() * V.norm() + D.norm());
}

/// Worst entrywise relative difference, with an absolute floor so that
/// near-zero entries compare against `floor_abs` instead of themselves.
double max_entry_gap(const Matrix& X, const Matrix& Y, double floor_abs) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double denom =
          std::max({std::abs(X(i, j)), std::abs(Y(i, j)), floor_abs});
      worst = std::max(worst, std::abs(X(i, j) - Y(i, j)) / denom);
    }
  }
  return worst;
}

BipartiteCM two_mode_cm(const Eigen::Matrix2d& v1, const Eigen::Matrix2d& v2,
                        const Eigen::Matrix2d& v3) {
  BipartiteCM bi;
  bi.v1 = v1;
  bi.v2 = v2;
  bi.v3 = v3;
  bi.mode_a = ModeIndex::microwave(0);
  bi.mode_b = ModeIndex::microwave(1);
  return bi;
}

BipartiteCM squeezed_cm(double r) {
  const double c = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  Eigen::Matrix2d v3;
  v3 << s, 0.0, 0.0, -s;
  return two_mode_cm(c * Eigen::Matrix2d::Identity(),
                     c * Eigen::Matrix2d::Identity(), v3);
}

/// Extracts one observable column out of a sweep, insisting that every
/// row was stable and solved.
std::vector<double> column(const SweepResult& result, std::size_t j) {
  std::vector<double> out;
  out.reserve(result.rows.size());
  for (const auto& row : result.rows) {
    if (!row.stable || row.e_n.size() <= j) {
      throw std::runtime_error("sweep " + result.scenario_name +
                               " has an unsolved row; cannot read column " +
                               std::to_string(j));
    }
    out.push_back(row.e_n[j]);
  }
  return out;
}

std::pair<bool, std::string> criterion_residuals() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_residual = 0.0;
  double worst_gap = 0.0;
  int systems = 0;

  const auto exercise = [&](const Matrix& A, const Matrix& D) {
    const LyapunovSolution direct = solve_lyapunov(A, D, LyapunovBackend::vectorized);
    const LyapunovSolution schur = solve_lyapunov(A, D, LyapunovBackend::schur);
    worst_residual = std::max({worst_residual,
                               lyapunov_relative_residual(A, direct.V, D),
                               lyapunov_relative_residual(A, schur.V, D)});
    worst_gap = std::max(worst_gap, (direct.V - schur.V).norm() / direct.V.norm());
    ++systems;
  };

  for (const auto& entry : scenario_configs()) {
    const BuiltSystem sys = build_system(entry.config);
    exercise(sys.A, Matrix(sys.d.asDiagonal()));
  }

  std::mt19937 rng(20260814u);
  const int dims[] = {2, 3, 4, 5, 6, 8, 10, 12};
  for (int k = 0; k < 50; ++k) {
    const int n = dims[k % 8];
    const Matrix A = with_abscissa(random_square(rng, n), -(0.5 + 0.05 * n));
    exercise(A, random_spd(rng, n));
  }

  const double elapsed = seconds_since(t0);
  const bool ok = worst_residual <= residual_limit &&
                  worst_gap <= backend_agreement_limit && elapsed < residual_budget_s;
  return {ok, fmt("%d systems, max residual %.2e (limit %.0e), "
                  "max backend gap %.2e (limit %.0e), %.1f s (budget %.0f s)",
                  systems, worst_residual, residual_limit, worst_gap,
                  backend_agreement_limit, elapsed, residual_budget_s)};
}

std::pair<bool, std::string> criterion_time_domain() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemConfig config = baseline_config(1);
  const BuiltSystem sys = build_system(config);
  const Matrix D = sys.d.asDiagonal();
  const Matrix V_ref = solve_lyapunov(sys.A, sys.d).V;

  double min_kappa = std::min(config.mech.kappa_m(), config.optical.kappa_c);
  for (const auto& mw : config.microwaves) {
    min_kappa = std::min(min_kappa, mw.kappa_w);
  }
  const double t_final = 20.0 / min_kappa;

  const double floor_abs = entry_floor_fraction * V_ref.cwiseAbs().maxCoeff();

  const Matrix V0 = Matrix::Zero(sys.A.rows(), sys.A.cols());
  const double dt = 2.0 * default_ode_step(sys.A, t_final);
  const Matrix V_ode = integrate_cm_ode(sys.A, D, V0, t_final, dt);
  const double ode_gap = max_entry_gap(V_ode, V_ref, floor_abs);

  // Independent route: composite Simpson quadrature of the propagated
  // noise integral V = int_0^T M(s) D M(s)^T ds with M(s) = exp(A s),
  // advancing M by half-panel propagator multiplications. The tail
  // beyond max|M| < 1e-120 is dropped: its contribution is bounded by
  // T ||D|| dim^2 1e-240, and carrying M further would park its entries
  // in denormal range where arithmetic crawls.
  const int panels = 1 << 22;
  const double h = t_final / panels;
  const Matrix Mh = matrix_exponential_propagator(sys.A, 0.5 * h);
  const auto weight = [&](const Matrix& M) -> Matrix {
    return (M * sys.d.asDiagonal()) * M.transpose();
  };
  Matrix M = Matrix::Identity(sys.A.rows(), sys.A.cols());
  Matrix W_left = weight(M);
  Matrix acc = Matrix::Zero(sys.A.rows(), sys.A.cols());
  for (int p = 0; p < panels; ++p) {
    M = M * Mh;
    const Matrix W_mid = weight(M);
    M = M * Mh;
    const Matrix W_right = weight(M);
    acc += W_left + 4.0 * W_mid + W_right;
    W_left = W_right;
    if ((p & 4095) == 0 && M.cwiseAbs().maxCoeff() < 1e-120) {
      break;
    }
  }
  const Matrix V_quad = (h / 6.0) * acc;
  const double quad_gap = max_entry_gap(V_quad, V_ref, floor_abs);

  const double elapsed = seconds_since(t0);
  const bool ok = ode_gap <= ode_match_limit && quad_gap <= quadrature_match_limit &&
                  elapsed < oracle_budget_s;
  return {ok, fmt("ODE gap %.2e (limit %.0e), quadrature gap %.2e (limit %.0e), "
                  "%.1f s (budget %.0f s)",
                  ode_gap, ode_match_limit, quad_gap, quadrature_match_limit, elapsed,
                  oracle_budget_s)};
}

std::pair<bool, std::string> criterion_analytic_entanglement() {
  double worst = 0.0;
  for (const double r : {0.1, 0.5, 1.0}) {
    const EntanglementResult result = log_negativity(squeezed_cm(r));
    worst = std::max(worst, std::abs(result.e_n - 2.0 * r));
  }
  const Eigen::Matrix2d half = 0.5 * Eigen::Matrix2d::Identity();
  const double vacuum =
      log_negativity(two_mode_cm(half, half, Eigen::Matrix2d::Zero())).e_n;
  const double thermal =
      log_negativity(two_mode_cm(3.7 * Eigen::Matrix2d::Identity(),
                                 1.2 * Eigen::Matrix2d::Identity(),
                                 Eigen::Matrix2d::Zero()))
          .e_n;
  const bool ok = worst <= tmsv_limit && vacuum == 0.0 && thermal == 0.0;
  return {ok, fmt("max |E_N - 2r| = %.2e (limit %.0e), vacuum E_N = %g, "
                  "thermal E_N = %g",
                  worst, tmsv_limit, vacuum, thermal)};
}

std::pair<bool, std::string> criterion_physicality() {
  double global_min = std::numeric_limits<double>::infinity();
  int configs = 0;
  for (const auto& entry : scenario_configs()) {
    const BuiltSystem sys = build_system(entry.config);
    const Matrix V = solve_lyapunov(sys.A, sys.d).V;
    const std::vector<double> nu = symplectic_eigenvalues(V);
    global_min = std::min(global_min, nu.front());
    ++configs;
  }
  const bool ok = global_min >= physicality_floor;
  return {ok, fmt("min symplectic eigenvalue %.12f across %d configs "
                  "(floor 1/2 - 1e-9)",
                  global_min, configs)};
}

std::pair<bool, std::string> criterion_pair_count_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  double peaks[3] = {0.0, 0.0, 0.0};
  double worst_evenness = 0.0;
  double worst_cross = 0.0;
  bool dips = true;
  const int pair_counts[3] = {2, 5, 10};
  for (int s = 0; s < 3; ++s) {
    const SweepResult sweep = run_sweep(scenario_fig2(pair_counts[s]));
    const std::vector<double> within = column(sweep, 0);
    const std::vector<double> cross = column(sweep, 1);
    const int last = static_cast<int>(within.size()) - 1;
    for (int k = 0; k <= last; ++k) {
      peaks[s] = std::max(peaks[s], within[k]);
      worst_evenness = std::max({worst_evenness,
                                 std::abs(within[k] - within[last - k]),
                                 std::abs(cross[k] - cross[last - k])});
      if (k != last / 2) {
        worst_cross = std::max(worst_cross, cross[k]);
      }
    }
    const int mid = last / 2;
    dips = dips && within[mid] < within[mid - 1] && within[mid] < within[mid + 1];
  }
  const double elapsed = seconds_since(t0);
  const bool ordered = peaks[0] > peaks[1] && peaks[1] > peaks[2];
  const bool ok = ordered && dips && worst_evenness <= evenness_limit &&
                  worst_cross <= cross_category_limit && elapsed < sweep_budget_s;
  return {ok, fmt("peaks %.4f > %.4f > %.4f, evenness %.1e (limit %.0e), "
                  "same-category max %.1e (limit %.0e), dip at zero %s, "
                  "%.1f s (budget %.0f s)",
                  peaks[0], peaks[1], peaks[2], worst_evenness, evenness_limit,
                  worst_cross, cross_category_limit, dips ? "yes" : "no", elapsed,
                  sweep_budget_s)};
}

std::pair<bool, std::string> criterion_frequency_ordering() {
  const SweepResult sweep = run_sweep(scenario_fig3());
  const std::vector<double> low = column(sweep, 0);    // 9 GHz pair
  const std::vector<double> mid = column(sweep, 1);    // 37.5 GHz pair
  const std::vector<double> high = column(sweep, 2);   // 60 GHz pair
  const std::vector<double> lo_hi = column(sweep, 3);  // 9 GHz + with 37.5 GHz -
  const std::vector<double> hi_lo = column(sweep, 4);  // 9 GHz - with 37.5 GHz +

  int ordered_points = 0;
  bool ordering_holds = true;
  const int last = static_cast<int>(low.size()) - 1;
  for (int k = 0; k <= last; ++k) {
    if (low[k] > 0.0 && mid[k] > 0.0 && high[k] > 0.0) {
      ++ordered_points;
      ordering_holds = ordering_holds && high[k] > mid[k] && mid[k] > low[k];
    }
  }
  double worst_mirror = 0.0;
  for (int k = 0; k <= last; ++k) {
    worst_mirror = std::max(worst_mirror, std::abs(lo_hi[k] - hi_lo[last - k]));
  }
  const bool ok =
      ordering_holds && ordered_points > 0 && worst_mirror <= mirror_limit;
  return {ok, fmt("frequency ordering held at %d/%d points, cross-pair mirror "
                  "asymmetry %.1e (limit %.0e)",
                  ordered_points, last + 1, worst_mirror, mirror_limit)};
}

std::pair<bool, std::string> criterion_temperature_decay() {
  double worst_increase = -std::numeric_limits<double>::infinity();
  for (const TemperatureModel model :
       {TemperatureModel::multifreq_3pair, TemperatureModel::identical_10pair}) {
    const SweepResult sweep = run_sweep(scenario_fig4(model));
    const std::size_t columns =
        model == TemperatureModel::multifreq_3pair ? 3 : 1;
    for (std::size_t j = 0; j < columns; ++j) {
      const std::vector<double> values = column(sweep, j);
      for (std::size_t k = 1; k < values.size(); ++k) {
        worst_increase = std::max(worst_increase, values[k] - values[k - 1]);
      }
    }
  }
  const SweepRow warm = evaluate_point(
      scenario_fig4(TemperatureModel::multifreq_3pair), 0.1);
  const double survivor = warm.stable && warm.e_n.size() == 3 ? warm.e_n[2] : 0.0;
  const bool ok = worst_increase <= monotonic_slack && survivor > 0.0;
  return {ok, fmt("largest step increase %.1e (slack %.0e), 60 GHz pair E_N at "
                  "100 mK = %.4f (must stay positive)",
                  worst_increase, monotonic_slack, survivor)};
}

std::pair<bool, std::string> criterion_opposite_detunings() {
  const SweepResult sweep = run_sweep(scenario_fig5());
  const std::vector<double> within = column(sweep, 0);
  const std::vector<double> cross_same = column(sweep, 1);
  const std::vector<double> cross_opposite = column(sweep, 2);
  const int last = static_cast<int>(within.size()) - 1;
  double worst_cross = 0.0;
  double best_within = 0.0;
  for (int k = 0; k <= last; ++k) {
    best_within = std::max(best_within, within[k]);
    if (k != last / 2) {
      worst_cross = std::max({worst_cross, cross_same[k], cross_opposite[k]});
    }
  }
  const bool ok = worst_cross <= cross_category_limit && best_within > 0.0;
  return {ok, fmt("cross-pair max %.1e away from DC = 0 (limit %.0e), "
                  "within-pair peak %.4f",
                  worst_cross, cross_category_limit, best_within)};
}

std::pair<bool, std::string> criterion_stability_verdicts() {
  int agreed = 0;
  int total = 0;
  bool all_agree = true;

  const auto compare = [&](const Matrix& A) {
    const StabilityReport eig = stability_check(A, StabilityMethod::eigenvalue);
    const StabilityReport cert =
        stability_check(A, StabilityMethod::lyapunov_certificate);
    ++total;
    if (eig.is_stable == cert.is_stable) {
      ++agreed;
    } else {
      all_agree = false;
    }
    return eig.is_stable;
  };

  for (const auto& entry : scenario_configs()) {
    compare(build_system(entry.config).A);
  }

  std::mt19937 rng(19391103u);
  const int dims[] = {2, 3, 4, 6, 8, 10, 12, 16};
  bool expectations_met = true;
  for (int k = 0; k < 100; ++k) {
    const int n = dims[k % 8];
    const bool want_stable = k % 2 == 0;
    const double target = want_stable ? -(0.5 + 0.05 * n) : (0.5 + 0.02 * n);
    const bool got_stable = compare(with_abscissa(random_square(rng, n), target));
    expectations_met = expectations_met && got_stable == want_stable;
  }

  // Drift with the mechanical damping entered at +kappa_m instead of
  // -kappa_m; the sweep configs are only usable because the solver uses
  // the damped sign, so this variant must be rejected as unstable.
  const SystemConfig config = baseline_config(1);
  const BuiltSystem sys = build_system(config);
  Matrix flipped = sys.A;
  flipped(1, 1) = config.mech.kappa_m();
  const StabilityReport flipped_eig =
      stability_check(flipped, StabilityMethod::eigenvalue);
  const StabilityReport flipped_cert =
      stability_check(flipped, StabilityMethod::lyapunov_certificate);
  const bool flipped_rejected = !flipped_eig.is_stable && !flipped_cert.is_stable;

  const bool ok = all_agree && expectations_met && flipped_rejected;
  return {ok, fmt("%d/%d verdict pairs agreed, random expectations %s, "
                  "undamped-sign drift rejected by both methods: %s "
                  "(its abscissa %+.4e vs corrected %+.4e; the drive-induced "
                  "damping outweighs +kappa_m = %+.4e at baseline power)",
                  agreed, total, expectations_met ? "met" : "violated",
                  flipped_rejected ? "yes" : "no", flipped_eig.spectral_abscissa,
                  stability_check(sys.A).spectral_abscissa,
                  config.mech.kappa_m())};
}

std::pair<bool, std::string> criterion_determinism() {
  const Scenario scenario = scenario_fig2(1);
  const std::string first = csv_string(run_sweep(scenario));
  const std::string second = csv_string(run_sweep(scenario));
  const bool identical = first == second;
  const bool lossless = csv_string(parse_csv_string(first)) == first;
  const bool ok = identical && lossless;
  return {ok, fmt("repeated runs byte-identical: %s, parse/render round-trip "
                  "lossless: %s (%zu bytes)",
                  identical ? "yes" : "no", lossless ? "yes" : "no", first.size())};
}

}  // namespace

int main() {
  run_criterion(1, "steady-state residuals and backend agreement", criterion_residuals);
  run_criterion(2, "steady state matches time integration and quadrature",
                criterion_time_domain);
  run_criterion(3, "analytic two-mode squeezed and separable benchmarks",
                criterion_analytic_entanglement);
  run_criterion(4, "solved covariance matrices are physical", criterion_physicality);
  run_criterion(5, "entanglement declines as pairs are added (fig2_detuning)",
                criterion_pair_count_sweep);
  run_criterion(6, "higher-frequency pairs entangle more strongly (fig3_multifreq)",
                criterion_frequency_ordering);
  run_criterion(7, "entanglement decays monotonically with temperature (fig4_temperature)",
                criterion_temperature_decay);
  run_criterion(8, "cross-pair entanglement needs opposite detunings "
                   "(fig5_detuning_coefficient)",
                criterion_opposite_detunings);
  run_criterion(9, "stability verdicts agree across methods", criterion_stability_verdicts);
  run_criterion(10, "deterministic CSV output and lossless round-trip",
                criterion_determinism);

  if (failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
  } else {
    std::printf("acceptance: %d of 10 criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
