// operator_core.hpp — Hermitian operator algebra, spectral decompositions, and
// the conditional operator A_rho = ∫_0^1 rho^λ A rho^(1-λ) dλ that generates
// the nonlinearity of the thermodynamic master equation.

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace tqme::ops {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Populations below this floor are treated as vanished (log clamping and the
// zero-eigenvalue limit of the log weight factor).
inline constexpr double kEigenvalueFloor = 1e-30;

// Below this log-gap the direct quotient (p_m - p_n)/(ln p_m - ln p_n) loses
// digits; a short series around equal arguments is used instead.
inline constexpr double kDegenerateLogGap = 1e-8;

// --------------------------- basic algebra ----------------------------------

void check_same_dim(const Matrix& a, const Matrix& b, const char* where);

// AB - BA; anti-Hermitian for Hermitian inputs
Matrix commutator(const Matrix& a, const Matrix& b);

// AB + BA; Hermitian for Hermitian inputs
Matrix anticommutator(const Matrix& a, const Matrix& b);

Matrix hermitize(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol = 1e-12);

// Re tr(A rho)
double expectation(const Matrix& a, const Matrix& rho);

// smallest eigenvalue of a Hermitian matrix
double min_eigenvalue(const Matrix& herm);

// trace within trace_tol of 1, Hermitian, eigenvalues >= -eig_tol
bool is_density(const Matrix& rho, double trace_tol = 1e-10, double eig_tol = 1e-10);
void validate_density(const Matrix& rho, double trace_tol = 1e-10, double eig_tol = 1e-10);

// exp(-H/kT) / Z for Hermitian H
Matrix canonical_state(const Matrix& hamiltonian, double kT);

// --------------------------- spectral decomposition --------------------------

// Eigenvalues sorted descending, eigenvector columns orthonormal with a fixed
// phase gauge (largest-magnitude entry of each column real positive). Equal
// eigenvalues are ordered by the first differing component of the gauge-fixed
// columns, so decompositions are reproducible.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;

    Eigen::Index dim() const { return eigenvalues.size(); }
    Matrix reconstruct() const;
};

SpectralDecomposition spectral_decompose(const Matrix& rho);

// --------------------------- conditional operator ----------------------------

// (p_m - p_n)/(ln p_m - ln p_n), extended by its limits: equal arguments give
// p_m, a vanished argument gives 0. Satisfies
//   0 <= factor <= (p_m + p_n)/2 <= 1   on [0,1]^2,
// with the middle bound attained iff p_m = p_n.
double log_weight_factor(double p_m, double p_n);

// A_rho, evaluated through matrix elements in the eigenbasis of rho:
//   <pi_m| A_rho |pi_n> = log_weight_factor(p_m, p_n) <pi_m| A |pi_n>.
// Linear in A, Hermitian when A is, tr(A_rho) = tr(A rho).
Matrix conditional_operator(const Matrix& a, const SpectralDecomposition& sd);

// A'_rho = 2 A_rho - (A rho + rho A); traceless, zero when [A, rho] = 0
Matrix nonlinear_part(const Matrix& a, const SpectralDecomposition& sd);

// ln rho with populations clamped to max(p_n, floor)
Matrix operator_log(const SpectralDecomposition& sd, double floor = kEigenvalueFloor);

// <<A;B>> = tr(A_rho B). Symmetric, positive for Hermitian A = B, and
// <<A;1>> = <A>. Real for a consistently Hermitian or anti-Hermitian pair.
double canonical_correlation(const Matrix& a, const Matrix& b,
                             const SpectralDecomposition& sd);

} // namespace tqme::ops
