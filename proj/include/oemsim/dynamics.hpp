#pragma once

#include <complex>
#include <string>
#include <vector>

#include "oemsim/matrix.hpp"
#include "oemsim/physics.hpp"

namespace oemsim {

/// Addresses one mode inside the stacked quadrature vector
/// u = [dq, dp, dX_c, dY_c, dX_w1, dY_w1, ...]: the mechanical mode owns
/// rows 0-1, the optical cavity rows 2-3, and microwave cavity j
/// (0-based list position) rows 4+2j and 5+2j.
struct ModeIndex {
  enum class Kind { mechanical, optical, microwave };

  Kind kind = Kind::mechanical;
  int microwave_index = -1;  ///< 0-based cavity position when kind == microwave

  static ModeIndex mechanical() { return {Kind::mechanical, -1}; }
  static ModeIndex optical() { return {Kind::optical, -1}; }
  static ModeIndex microwave(int j) { return {Kind::microwave, j}; }

  int block() const {
    switch (kind) {
      case Kind::mechanical: return 0;
      case Kind::optical: return 1;
      case Kind::microwave: return 2 + microwave_index;
    }
    return 0;
  }
  int row() const { return 2 * block(); }

  friend bool operator==(const ModeIndex& a, const ModeIndex& b) {
    return a.kind == b.kind && (a.kind != Kind::microwave ||
                                a.microwave_index == b.microwave_index);
  }
};

/// Assembles the (2n+4)x(2n+4) drift matrix of the linearized dynamics
/// du/dt = A u + noise. Every entry outside the documented sparsity
/// pattern is exactly zero.
Matrix build_drift(const SystemConfig& config, const DerivedCouplings& derived);

/// Diagonal of the diffusion matrix:
/// [0, kappa_m(2 nbar_m + 1), kappa_c, kappa_c,
///  kappa_w1(2 N_1 + 1), kappa_w1(2 N_1 + 1), ...].
/// The optical entries use occupation 0 (optical frequencies are far
/// above any laboratory thermal scale).
Vector build_diffusion(const SystemConfig& config,
                       const DerivedCouplings& derived);

enum class StabilityMethod { eigenvalue, lyapunov_certificate, both };

struct StabilityReport {
  /// Max real part of the drift spectrum, 1/s. NaN when only the
  /// Lyapunov certificate ran (that method never computes the spectrum).
  double spectral_abscissa = 0.0;
  bool is_stable = false;
  StabilityMethod method = StabilityMethod::eigenvalue;
};

/// Certifies asymptotic stability of du/dt = A u. The eigenvalue method
/// computes the spectrum and tests its abscissa against zero (strict,
/// no tolerance); the certificate method solves A V + V A^T = -I and
/// tests V for positive definiteness. Eigensolver non-convergence and
/// disagreement between the two methods raise numerical_error rather
/// than returning a silent verdict.
StabilityReport stability_check(const Matrix& A,
                                StabilityMethod method = StabilityMethod::eigenvalue);

/// Full spectrum of the drift matrix (for reporting and diagnostics).
std::vector<std::complex<double>> drift_spectrum(const Matrix& A);

}  // namespace oemsim
