#pragma once

#include <vector>

#include "oemsim/dynamics.hpp"
#include "oemsim/matrix.hpp"
#include "oemsim/physics.hpp"

namespace oemsim {

/// 4x4 bipartite covariance matrix in 2x2 block form:
/// [[v1, v3], [v3^T, v2]] with mode A first.
struct BipartiteCM {
  Eigen::Matrix2d v1 = Eigen::Matrix2d::Zero();  ///< mode A self block
  Eigen::Matrix2d v2 = Eigen::Matrix2d::Zero();  ///< mode B self block
  Eigen::Matrix2d v3 = Eigen::Matrix2d::Zero();  ///< cross block (A rows, B columns)
  ModeIndex mode_a;
  ModeIndex mode_b;

  Eigen::Matrix4d full() const;
};

struct EntanglementResult {
  double e_n = 0.0;        ///< logarithmic negativity, >= 0
  double eta_minus = 0.0;  ///< smallest partially transposed symplectic eigenvalue
  double sigma = 0.0;      ///< det v1 + det v2 - 2 det v3
  ModeIndex mode_a;
  ModeIndex mode_b;
};

/// Extracts the 4x4 reduced covariance matrix of modes a and b
/// (rows/columns {2a, 2a+1, 2b, 2b+1}, mode a first). Rejects a == b and
/// out-of-range modes.
BipartiteCM reduce_cm(const Matrix& V, ModeIndex a, ModeIndex b);

/// Logarithmic negativity E_N = max(0, -ln 2 eta-) with
/// eta- = sqrt((sigma - sqrt(sigma^2 - 4 det Vbi)) / 2).
/// The input must be physical (both symplectic eigenvalues of the
/// assembled 4x4 at least 1/2 - 1e-9); a radicand below -1e-12 is
/// rejected, a merely rounding-negative one is clamped to zero. The
/// two modes are ordered canonically inside the computation, so the
/// result is bitwise independent of argument order.
EntanglementResult log_negativity(const BipartiteCM& bi);

/// Symplectic spectrum of a symmetric even-dimensional matrix: the
/// dim/2 magnitudes of the eigenvalues of i Omega V, sorted ascending,
/// where Omega is the standard symplectic form in (X, Y)-interleaved
/// ordering. Vacuum corresponds to 1/2 in this convention.
std::vector<double> symplectic_eigenvalues(const Matrix& V);

/// Symmetric matrix of E_N over all microwave cavity pairs of a solved
/// steady state; diagonal entries are zero.
Matrix pairwise_entanglement_map(const Matrix& V, const SystemConfig& config);

}  // namespace oemsim
