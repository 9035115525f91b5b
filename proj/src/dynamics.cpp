#include "oemsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "oemsim/errors.hpp"
#include "oemsim/steady_state.hpp"

namespace oemsim {

Matrix build_drift(const SystemConfig& config, const DerivedCouplings& derived) {
  const int n = static_cast<int>(config.microwaves.size());
  const int dim = 2 * n + 4;
  Matrix A = Matrix::Zero(dim, dim);

  const double omega_m = config.mech.omega_m;
  A(0, 1) = omega_m;
  A(1, 0) = -omega_m;
  A(1, 1) = -config.mech.kappa_m();

  const auto& opt = config.optical;
  A(1, 2) = derived.g_c;
  A(2, 2) = -opt.kappa_c;
  A(2, 3) = opt.delta_c;
  A(3, 0) = derived.g_c;
  A(3, 2) = -opt.delta_c;
  A(3, 3) = -opt.kappa_c;

  for (int j = 0; j < n; ++j) {
    const auto& mw = config.microwaves[j];
    const int r = 4 + 2 * j;
    A(1, r) = derived.g_w[j];
    A(r, r) = -mw.kappa_w;
    A(r, r + 1) = mw.delta_w;
    A(r + 1, 0) = derived.g_w[j];
    A(r + 1, r) = -mw.delta_w;
    A(r + 1, r + 1) = -mw.kappa_w;
  }
  return A;
}

Vector build_diffusion(const SystemConfig& config, const DerivedCouplings& derived) {
  const int n = static_cast<int>(config.microwaves.size());
  Vector d = Vector::Zero(2 * n + 4);
  d(1) = config.mech.kappa_m() * (2.0 * derived.nbar_m + 1.0);
  d(2) = config.optical.kappa_c;
  d(3) = config.optical.kappa_c;
  for (int j = 0; j < n; ++j) {
    const double entry =
        config.microwaves[j].kappa_w * (2.0 * derived.n_thermal_w[j] + 1.0);
    d(4 + 2 * j) = entry;
    d(5 + 2 * j) = entry;
  }
  return d;
}

std::vector<std::complex<double>> drift_spectrum(const Matrix& A) {
  if (A.rows() != A.cols() || !A.allFinite()) {
    throw validation_error("drift_spectrum: matrix must be square and finite");
  }
  Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("drift_spectrum: eigensolver failed to converge");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) out[i] = ev(i);
  return out;
}

namespace {

StabilityReport check_by_eigenvalues(const Matrix& A) {
  StabilityReport report;
  report.method = StabilityMethod::eigenvalue;
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& lambda : drift_spectrum(A)) {
    abscissa = std::max(abscissa, lambda.real());
  }
  report.spectral_abscissa = abscissa;
  report.is_stable = abscissa < 0.0;
  return report;
}

StabilityReport check_by_certificate(const Matrix& A) {
  StabilityReport report;
  report.method = StabilityMethod::lyapunov_certificate;
  report.spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
  const Matrix I = Matrix::Identity(A.rows(), A.cols());
  const Matrix V =
      detail::solve_lyapunov_unchecked(A, I, LyapunovBackend::vectorized);
  Eigen::SelfAdjointEigenSolver<Matrix> spectrum(V, Eigen::EigenvaluesOnly);
  if (spectrum.info() != Eigen::Success) {
    throw numerical_error("stability_check: certificate spectrum did not converge");
  }
  report.is_stable = spectrum.eigenvalues().minCoeff() > 0.0;
  return report;
}

}  // namespace

StabilityReport stability_check(const Matrix& A, StabilityMethod method) {
  if (A.rows() != A.cols() || !A.allFinite()) {
    throw validation_error("stability_check: matrix must be square and finite");
  }
  switch (method) {
    case StabilityMethod::eigenvalue:
      return check_by_eigenvalues(A);
    case StabilityMethod::lyapunov_certificate:
      return check_by_certificate(A);
    case StabilityMethod::both: {
      StabilityReport eig = check_by_eigenvalues(A);
      StabilityReport cert = check_by_certificate(A);
      if (eig.is_stable != cert.is_stable) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "stability_check: methods disagree (eigenvalue says %s, "
                      "certificate says %s; abscissa %.6g)",
                      eig.is_stable ? "stable" : "unstable",
                      cert.is_stable ? "stable" : "unstable",
                      eig.spectral_abscissa);
        throw numerical_error(buf);
      }
      eig.method = StabilityMethod::both;
      return eig;
    }
  }
  throw validation_error("stability_check: unknown method");
}

}  // namespace oemsim
