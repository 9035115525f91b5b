#include "oemsim/steady_state.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "oemsim/dynamics.hpp"
#include "oemsim/errors.hpp"

namespace oemsim {

namespace {

// Dense LU on the stacked system is cheap up to this state dimension
// (stacked size 576); beyond it the Kronecker matrix is factored sparse.
constexpr int dense_kron_limit = 24;
constexpr int refinement_passes = 2;

Matrix symmetrized(const Matrix& M) {
  return (M + M.transpose()) / 2.0;
}

Matrix residual_of(const Matrix& A, const Matrix& V, const Matrix& D) {
  const Matrix AV = A * V;
  return AV + AV.transpose() + D;
}

double relative_residual_of(const Matrix& A, const Matrix& V, const Matrix& D,
                            double* absolute = nullptr) {
  const double r = residual_of(A, V, D).norm();
  if (absolute) *absolute = r;
  return r / (2.0 * A.norm() * V.norm() + D.norm());
}

// Column-major stacking of M, as a vector view.
Vector stacked(const Matrix& M) {
  return Eigen::Map<const Vector>(M.data(), M.size());
}

Matrix unstacked(const Vector& v, Eigen::Index n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

void check_first_solve(const Matrix& A, const Matrix& V, const Matrix& D,
                       const char* backend_name) {
  // A gross residual on the very first pass marks a (numerically)
  // singular stacked system: some eigenvalue pair of A sums to zero and
  // refinement cannot recover it.
  const double rel = relative_residual_of(A, V, D);
  if (!std::isfinite(rel) || rel > 1e-2) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "solve_lyapunov(%s): singular stacked system "
                  "(first-pass relative residual %.3g)",
                  backend_name, rel);
    throw numerical_error(buf);
  }
}

Matrix solve_vectorized(const Matrix& A, const Matrix& D) {
  const Eigen::Index n = A.rows();
  const Eigen::Index N = n * n;

  if (n <= dense_kron_limit) {
    Matrix K = Matrix::Zero(N, N);
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(j * n, j * n, n, n) = A;  // I (x) A
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) {
        const double a = A(j, l);  // A (x) I
        if (a == 0.0) continue;
        for (Eigen::Index i = 0; i < n; ++i) {
          K(j * n + i, l * n + i) += a;
        }
      }
    }
    Eigen::PartialPivLU<Matrix> lu(K);
    Matrix V = symmetrized(unstacked(lu.solve(-stacked(D)), n));
    check_first_solve(A, V, D, "vectorized");
    for (int pass = 0; pass < refinement_passes; ++pass) {
      const Matrix R = residual_of(A, V, D);
      V += symmetrized(unstacked(lu.solve(-stacked(R)), n));
    }
    return V;
  }

  using Sparse = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(n) * 4);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const double a = A(i, k);
        if (a != 0.0) triplets.emplace_back(j * n + i, j * n + k, a);
      }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double a = A(j, l);
      if (a == 0.0) continue;
      for (Eigen::Index i = 0; i < n; ++i) {
        triplets.emplace_back(j * n + i, l * n + i, a);
      }
    }
  }
  Sparse K(N, N);
  K.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Sparse> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    throw numerical_error(
        "solve_lyapunov(vectorized): sparse factorization of the stacked "
        "system failed (singular?)");
  }
  Matrix V = symmetrized(unstacked(lu.solve(Vector(-stacked(D))), n));
  check_first_solve(A, V, D, "vectorized");
  for (int pass = 0; pass < refinement_passes; ++pass) {
    const Matrix R = residual_of(A, V, D);
    V += symmetrized(unstacked(lu.solve(Vector(-stacked(R))), n));
  }
  return V;
}

using ComplexMatrix = Eigen::MatrixXcd;

// Solves T Y + Y T^H = C for upper-triangular T by back substitution
// over columns (last column first). Pivots are T(k,k) + conj(T(j,j)).
ComplexMatrix triangular_sylvester(const ComplexMatrix& T, const ComplexMatrix& C) {
  const Eigen::Index n = T.rows();
  const double scale = T.cwiseAbs().maxCoeff();
  ComplexMatrix Y(n, n);
  ComplexMatrix shifted(n, n);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    Eigen::VectorXcd rhs = C.col(k);
    if (k + 1 < n) {
      rhs.noalias() -= Y.rightCols(n - 1 - k) * T.row(k).tail(n - 1 - k).adjoint();
    }
    shifted = T;
    const std::complex<double> shift = std::conj(T(k, k));
    shifted.diagonal().array() += shift;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(shifted(i, i)) <
          1e3 * std::numeric_limits<double>::epsilon() * scale) {
        throw numerical_error(
            "solve_lyapunov(schur): singular triangular system "
            "(an eigenvalue pair of A sums to zero)");
      }
    }
    Y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return Y;
}

Matrix solve_schur(const Matrix& A, const Matrix& D) {
  const ComplexMatrix Ac = A.cast<std::complex<double>>();
  Eigen::ComplexSchur<ComplexMatrix> schur(Ac);
  if (schur.info() != Eigen::Success) {
    throw numerical_error("solve_lyapunov(schur): Schur decomposition failed");
  }
  const ComplexMatrix& T = schur.matrixT();
  const ComplexMatrix& U = schur.matrixU();

  auto solve_core = [&](const Matrix& rhs) {
    const ComplexMatrix C = -(U.adjoint() * rhs.cast<std::complex<double>>() * U);
    const ComplexMatrix Y = triangular_sylvester(T, C);
    return symmetrized((U * Y * U.adjoint()).real());
  };

  Matrix V = solve_core(D);
  check_first_solve(A, V, D, "schur");
  for (int pass = 0; pass < refinement_passes; ++pass) {
    const Matrix R = residual_of(A, V, D);
    V += solve_core(R);
  }
  return V;
}

void check_inputs(const Matrix& A, const Matrix& D) {
  if (A.rows() != A.cols() || D.rows() != D.cols() || A.rows() != D.rows()) {
    throw validation_error("solve_lyapunov: A and D must be square and same size");
  }
  if (!A.allFinite() || !D.allFinite()) {
    throw validation_error("solve_lyapunov: non-finite entries");
  }
}

template <typename Mat>
Mat rk4_integrate(const Mat& A, const Mat& D, Mat V, double t_final, double dt) {
  // For symmetric V the flow is A V + (A V)^T + D: one product per stage.
  Mat k1, k2, k3, k4, arg, prod;
  auto flow = [&](const Mat& W, Mat& out) {
    prod.noalias() = A * W;
    out = prod + prod.transpose() + D;
  };
  const long long full_steps = static_cast<long long>(t_final / dt);
  const double remainder = t_final - static_cast<double>(full_steps) * dt;
  auto step = [&](double h) {
    flow(V, k1);
    arg = V + (h / 2.0) * k1;
    flow(arg, k2);
    arg = V + (h / 2.0) * k2;
    flow(arg, k3);
    arg = V + h * k3;
    flow(arg, k4);
    V += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    V = ((V + V.transpose()) / 2.0).eval();
  };
  for (long long s = 0; s < full_steps; ++s) {
    step(dt);
    if (!V.allFinite()) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "integrate_cm_ode: non-finite covariance at t = %.9g",
                    static_cast<double>(s + 1) * dt);
      throw numerical_error(buf);
    }
  }
  if (remainder > 0.0) {
    step(remainder);
    if (!V.allFinite()) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "integrate_cm_ode: non-finite covariance at t = %.9g", t_final);
      throw numerical_error(buf);
    }
  }
  return V;
}

}  // namespace

namespace detail {

Matrix solve_lyapunov_unchecked(const Matrix& A, const Matrix& D,
                                LyapunovBackend backend,
                                SolveDiagnostics* diagnostics) {
  check_inputs(A, D);
  Matrix V = backend == LyapunovBackend::vectorized ? solve_vectorized(A, D)
                                                    : solve_schur(A, D);
  if (diagnostics) {
    diagnostics->backend = backend;
    diagnostics->relative_residual =
        relative_residual_of(A, V, D, &diagnostics->residual_norm);
  }
  return V;
}

}  // namespace detail

LyapunovSolution solve_lyapunov(const Matrix& A, const Matrix& D,
                                LyapunovBackend backend) {
  check_inputs(A, D);
  const StabilityReport stability = stability_check(A, StabilityMethod::eigenvalue);
  if (!stability.is_stable) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "solve_lyapunov: drift matrix is not stable "
                  "(spectral abscissa %.9g >= 0)",
                  stability.spectral_abscissa);
    throw numerical_error(buf);
  }
  LyapunovSolution out;
  out.V = detail::solve_lyapunov_unchecked(A, D, backend, &out.diagnostics);
  if (!(out.diagnostics.relative_residual <= lyapunov_residual_limit)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "solve_lyapunov: relative residual %.3g exceeds the %.0e limit",
                  out.diagnostics.relative_residual, lyapunov_residual_limit);
    throw numerical_error(buf);
  }
  return out;
}

LyapunovSolution solve_lyapunov(const Matrix& A, const Vector& D_diagonal,
                                LyapunovBackend backend) {
  return solve_lyapunov(A, Matrix(D_diagonal.asDiagonal()), backend);
}

Matrix integrate_cm_ode(const Matrix& A, const Matrix& D, const Matrix& V0,
                        double t_final, double dt) {
  if (A.rows() != A.cols() || D.rows() != D.cols() || V0.rows() != V0.cols() ||
      A.rows() != D.rows() || A.rows() != V0.rows()) {
    throw validation_error("integrate_cm_ode: matrices must be square and same size");
  }
  if (!A.allFinite() || !D.allFinite() || !V0.allFinite()) {
    throw validation_error("integrate_cm_ode: non-finite entries");
  }
  if (!(dt > 0.0) || t_final < 0.0) {
    throw validation_error("integrate_cm_ode: require dt > 0 and t_final >= 0");
  }
  if (t_final == 0.0) return V0;

  // The one-pair network (dimension 8) dominates long-horizon use; a
  // fixed-size path keeps the per-step cost at a handful of small
  // matrix products.
  const Eigen::Index n = A.rows();
  if (n == 8) {
    using M8 = Eigen::Matrix<double, 8, 8>;
    return rk4_integrate<M8>(A, D, V0, t_final, dt);
  }
  if (n == 12) {
    using M12 = Eigen::Matrix<double, 12, 12>;
    return rk4_integrate<M12>(A, D, V0, t_final, dt);
  }
  return rk4_integrate<Matrix>(A, D, V0, t_final, dt);
}

Matrix matrix_exponential_propagator(const Matrix& A, double t) {
  if (A.rows() != A.cols() || !A.allFinite()) {
    throw validation_error("matrix_exponential_propagator: matrix must be square and finite");
  }
  if (!(t >= 0.0)) {
    throw validation_error("matrix_exponential_propagator: require t >= 0");
  }
  if (t == 0.0) return Matrix::Identity(A.rows(), A.cols());
  return Matrix((A * t).exp());
}

double default_ode_step(const Matrix& A, double t_final) {
  if (!(t_final > 0.0)) {
    throw validation_error("default_ode_step: require t_final > 0");
  }
  double max_mod = 0.0;
  for (const auto& lambda : drift_spectrum(A)) {
    max_mod = std::max(max_mod, std::abs(lambda));
  }
  const double cap = t_final / 1000.0;
  if (max_mod == 0.0) return cap;
  return std::min(1.0 / (50.0 * max_mod), cap);
}

}  // namespace oemsim
