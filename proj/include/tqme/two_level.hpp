// two_level.hpp — Closed-form two-level realization of the thermodynamic
// master equation: Pauli-vector algebra, the nonlinearity weight mu(m), the
// nonlinear Bloch equation, its equilibrium, and the linearized relaxation
// matrix around it.

#pragma once

#include "tqme/master_equations.hpp"
#include "tqme/operator_core.hpp"

#include <Eigen/Dense>

#include <functional>

namespace tqme::twolevel {

using ops::Matrix;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

Matrix identity2();
Matrix sigma1();
Matrix sigma2();
Matrix sigma3();

// --------------------------- Pauli-vector algebra ----------------------------

// Every Hermitian 2x2 matrix is (1/2)(alpha I + a . sigma); alpha is the trace.
struct PauliCoeffs {
    double alpha;
    Vec3 a;
};

Matrix pauli_compose(double alpha, const Vec3& a);
PauliCoeffs pauli_decompose(const Matrix& a);

// f(A) through the eigenvalues (alpha ± |a|)/2:
//   f(A) = (1/2)[(f_+ + f_-) I + (f_+ - f_-) (a/|a|) . sigma].
// |a| = 0 collapses to f(alpha/2) I.
PauliCoeffs pauli_function(const std::function<double(double)>& f, double alpha, const Vec3& a);

// --------------------------- nonlinearity weight -----------------------------

// mu(m) = 1/m^2 - 1/(m artanh m) on [0,1); series below m = 1e-3 where the
// direct form cancels. mu(0) = 1/3, mu -> 1 for m -> 1.
double mu(double m_norm);

// d mu/dm = -2/m^3 + (artanh m + m/(1-m^2)) / (m artanh m)^2, same series switch
double mu_derivative(double m_norm);

// Pauli vector of A'_rho for rho = (1/2)(I + m.sigma) and A = (1/2) a.sigma:
//   -mu(|m|) [m^2 1 - m m^T] a
Vec3 nonlinear_part_vector(const Vec3& m, const Vec3& a);

// --------------------------- Bloch dynamics ----------------------------------

struct TwoLevelParams {
    double omega = 1.0;   // level splitting, rad/time
    double gamma0 = 0.1;  // spontaneous emission rate
    double kT = 0.5;      // bath k_B T_e, energy units (hbar = 1)
    bool isotropic = false; // add the sigma_3/2 coupling with unit weight
    double q3_boost = 0.0;  // extra longitudinal coupling weight on top

    double longitudinal_weight() const { return (isotropic ? 1.0 : 0.0) + q3_boost; }
    void validate() const;
};

// dm/dt = omega q3 x m - gamma0 (2kT/hw) R m - gamma0 q3
//         + gamma0 (mu/2)(m^2 1 + m m^T) q3,
// with R = (1/2)(1 + q3 q3^T), or the unit matrix for isotropic coupling.
// Stationary exactly at the canonical m_eq for any temperature.
Vec3 bloch_rhs(const Vec3& m, const TwoLevelParams& p);

// m_eq = -q3 tanh(hbar omega / 2kT); always inside the Bloch sphere
Vec3 bloch_equilibrium(const TwoLevelParams& p);

// the mu = 0 equation as written; its fixed point -q3 (hbar omega/2kT) leaves
// the sphere at low temperature
Vec3 bloch_rhs_linear(const Vec3& m, const TwoLevelParams& p);

// mu = 0 equation with hbar omega/2kT -> tanh(hbar omega/2kT); Lindblad form,
// fixed point restored to bloch_equilibrium
Vec3 bloch_rhs_lindblad(const Vec3& m, const TwoLevelParams& p);

// Jacobian of bloch_rhs at the equilibrium point
Mat3 bloch_linearized_matrix(const TwoLevelParams& p);

// --------------------------- density-matrix bridge ---------------------------

Matrix density_from_bloch(const Vec3& m);
Vec3 bloch_from_density(const Matrix& rho);

// H = (hbar omega/2) sigma3, couplings sigma_1/2 and sigma_2/2 (plus a
// weighted sigma_3/2 when longitudinal coupling is on)
meq::SystemSpec make_spec(const TwoLevelParams& p, double hbar = 1.0);
meq::BathState make_bath(const TwoLevelParams& p, double hbar = 1.0);

} // namespace tqme::twolevel
