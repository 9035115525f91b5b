#pragma once

#include "oemsim/matrix.hpp"

namespace oemsim {

enum class LyapunovBackend { vectorized, schur };

struct SolveDiagnostics {
  double residual_norm = 0.0;      ///< ||A V + V A^T + D||_F
  double relative_residual = 0.0;  ///< residual_norm / (2||A||_F ||V||_F + ||D||_F)
  LyapunovBackend backend = LyapunovBackend::vectorized;
};

struct LyapunovSolution {
  Matrix V;  ///< symmetric steady-state covariance matrix
  SolveDiagnostics diagnostics;
};

/// Largest relative residual an accepted solve may carry.
inline constexpr double lyapunov_residual_limit = 1e-9;

/// Solves A V + V A^T = -D for the stationary covariance matrix of a
/// stable system. The result is symmetrized before return. Throws
/// numerical_error for unstable A (the message names the spectral
/// abscissa), for a singular stacked system, and for solutions whose
/// relative residual exceeds lyapunov_residual_limit.
///
/// Backends: `vectorized` factors the stacked Kronecker system with LU
/// and polishes with two refinement passes (dense below a dimension
/// threshold, sparse above it); `schur` triangularizes A with a complex
/// Schur decomposition and back-substitutes, with the same refinement.
/// The two routes share no factorization and serve as mutual checks.
LyapunovSolution solve_lyapunov(const Matrix& A, const Matrix& D,
                                LyapunovBackend backend = LyapunovBackend::vectorized);
LyapunovSolution solve_lyapunov(const Matrix& A, const Vector& D_diagonal,
                                LyapunovBackend backend = LyapunovBackend::vectorized);

/// Fixed-step classical fourth-order integration of the matrix ODE
/// dV/dt = A V + V A^T + D from V0. V stays symmetric by construction
/// (symmetrized each step). Non-finite entries abort with an error
/// naming the integration time reached.
Matrix integrate_cm_ode(const Matrix& A, const Matrix& D, const Matrix& V0,
                        double t_final, double dt);

/// M(t) = exp(A t) by scaling-and-squaring. Requires finite A and t >= 0.
Matrix matrix_exponential_propagator(const Matrix& A, double t);

/// Pinned step-size policy for integrate_cm_ode:
/// dt = min(1 / (50 max|lambda(A)|), t_final / 1000).
double default_ode_step(const Matrix& A, double t_final);

namespace detail {

/// Lyapunov solve without the stability gate or the residual acceptance
/// check; used by the stability certificate and by tests that probe
/// marginal systems. Optionally reports diagnostics.
Matrix solve_lyapunov_unchecked(const Matrix& A, const Matrix& D,
                                LyapunovBackend backend,
                                SolveDiagnostics* diagnostics = nullptr);

}  // namespace detail

}  // namespace oemsim
