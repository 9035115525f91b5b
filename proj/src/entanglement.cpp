#include "oemsim/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "oemsim/errors.hpp"

namespace oemsim {

namespace {

constexpr double physicality_slack = 1e-9;
constexpr double radicand_slack = 1e-12;

double det2(const Eigen::Matrix2d& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// Explicit cofactor expansion along the first row; the dimension is
// fixed, so no factorization is warranted.
double det4(const Eigen::Matrix4d& m) {
  auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
           m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
           m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
  };
  return m(0, 0) * minor3(1, 2, 3, 1, 2, 3) - m(0, 1) * minor3(1, 2, 3, 0, 2, 3) +
         m(0, 2) * minor3(1, 2, 3, 0, 1, 3) - m(0, 3) * minor3(1, 2, 3, 0, 1, 2);
}

Eigen::Matrix4d assemble(const Eigen::Matrix2d& v1, const Eigen::Matrix2d& v2,
                         const Eigen::Matrix2d& v3) {
  Eigen::Matrix4d full;
  full.topLeftCorner<2, 2>() = v1;
  full.topRightCorner<2, 2>() = v3;
  full.bottomLeftCorner<2, 2>() = v3.transpose();
  full.bottomRightCorner<2, 2>() = v2;
  return full;
}

// Strict ordering on 2x2 blocks so the two modes can be ranked
// deterministically; ties on (v1, v2) fall through to the cross block.
int compare_blocks(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (a(i, j) < b(i, j)) return -1;
      if (a(i, j) > b(i, j)) return 1;
    }
  }
  return 0;
}

}  // namespace

Eigen::Matrix4d BipartiteCM::full() const {
  return assemble(v1, v2, v3);
}

BipartiteCM reduce_cm(const Matrix& V, ModeIndex a, ModeIndex b) {
  if (V.rows() != V.cols() || V.rows() % 2 != 0) {
    throw validation_error("reduce_cm: covariance matrix must be square with even dimension");
  }
  if (a == b) {
    throw validation_error("reduce_cm: the two modes must differ");
  }
  const int ra = a.row();
  const int rb = b.row();
  if (ra < 0 || ra + 1 >= V.rows() || rb < 0 || rb + 1 >= V.rows()) {
    throw validation_error("reduce_cm: mode index out of range");
  }
  BipartiteCM out;
  out.mode_a = a;
  out.mode_b = b;
  out.v1 = V.block<2, 2>(ra, ra);
  out.v2 = V.block<2, 2>(rb, rb);
  out.v3 = V.block<2, 2>(ra, rb);
  return out;
}

EntanglementResult log_negativity(const BipartiteCM& bi) {
  // sigma and det v3 are insensitive to mode order as written (IEEE
  // addition and multiplication commute); only det4 needs the canonical
  // assembly below to make the result bitwise order-independent.
  const double sigma = det2(bi.v1) + det2(bi.v2) - 2.0 * det2(bi.v3);

  const int order = compare_blocks(bi.v1, bi.v2);
  Eigen::Matrix4d full;
  if (order < 0 ||
      (order == 0 && compare_blocks(bi.v3, bi.v3.transpose()) <= 0)) {
    full = assemble(bi.v1, bi.v2, bi.v3);
  } else {
    full = assemble(bi.v2, bi.v1, bi.v3.transpose());
  }

  {
    const auto nu = symplectic_eigenvalues(full);
    if (nu.front() < 0.5 - physicality_slack) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "log_negativity: unphysical bipartite covariance matrix "
                    "(symplectic eigenvalue %.12g < 1/2)",
                    nu.front());
      throw validation_error(buf);
    }
  }

  double radicand = sigma * sigma - 4.0 * det4(full);
  if (radicand < 0.0) {
    if (radicand < -radicand_slack) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "log_negativity: negative discriminant %.3g beyond tolerance",
                    radicand);
      throw numerical_error(buf);
    }
    radicand = 0.0;
  }
  const double inner = (sigma - std::sqrt(radicand)) / 2.0;
  if (!(inner > 0.0)) {
    throw numerical_error(
        "log_negativity: degenerate partially transposed spectrum");
  }

  EntanglementResult out;
  out.mode_a = bi.mode_a;
  out.mode_b = bi.mode_b;
  out.sigma = sigma;
  out.eta_minus = std::sqrt(inner);
  out.e_n = std::max(0.0, -std::log(2.0 * out.eta_minus));
  return out;
}

std::vector<double> symplectic_eigenvalues(const Matrix& V) {
  const Eigen::Index dim = V.rows();
  if (dim != V.cols() || dim % 2 != 0 || dim == 0) {
    throw validation_error("symplectic_eigenvalues: matrix must be square with even dimension");
  }
  if (!V.allFinite()) {
    throw validation_error("symplectic_eigenvalues: non-finite entries");
  }
  if ((V - V.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, V.cwiseAbs().maxCoeff())) {
    throw validation_error("symplectic_eigenvalues: matrix is not symmetric");
  }

  Matrix omega_v = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k + 1 < dim; k += 2) {
    omega_v.row(k) = V.row(k + 1);
    omega_v.row(k + 1) = -V.row(k);
  }
  Eigen::EigenSolver<Matrix> solver(omega_v, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("symplectic_eigenvalues: eigensolver failed to converge");
  }
  std::vector<double> magnitudes(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    magnitudes[i] = std::abs(solver.eigenvalues()(i));
  }
  std::sort(magnitudes.begin(), magnitudes.end());
  // Magnitudes arrive in +/- pairs; average each pair.
  std::vector<double> out(dim / 2);
  for (Eigen::Index i = 0; i < dim / 2; ++i) {
    out[i] = (magnitudes[2 * i] + magnitudes[2 * i + 1]) / 2.0;
  }
  return out;
}

Matrix pairwise_entanglement_map(const Matrix& V, const SystemConfig& config) {
  const int n = static_cast<int>(config.microwaves.size());
  if (V.rows() != 2 * n + 4) {
    throw validation_error(
        "pairwise_entanglement_map: covariance dimension does not match the config");
  }
  Matrix map = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto result =
          log_negativity(reduce_cm(V, ModeIndex::microwave(i), ModeIndex::microwave(j)));
      map(i, j) = result.e_n;
      map(j, i) = result.e_n;
    }
  }
  return map;
}

}  // namespace oemsim
