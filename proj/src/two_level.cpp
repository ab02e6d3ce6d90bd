#include "tqme/two_level.hpp"

#include <cmath>
#include <stdexcept>

namespace tqme::twolevel {

namespace {
const Vec3 q3(0.0, 0.0, 1.0);
constexpr double kSeriesSwitch = 1e-3;
} // namespace

Matrix identity2() { return Matrix::Identity(2, 2); }

Matrix sigma1() {
    Matrix s(2, 2);
    s << 0.0, 1.0,
         1.0, 0.0;
    return s;
}

Matrix sigma2() {
    Matrix s(2, 2);
    s << 0.0, ops::Complex(0.0, -1.0),
         ops::Complex(0.0, 1.0), 0.0;
    return s;
}

Matrix sigma3() {
    Matrix s(2, 2);
    s << 1.0, 0.0,
         0.0, -1.0;
    return s;
}

// --------------------------- Pauli-vector algebra ----------------------------

Matrix pauli_compose(double alpha, const Vec3& a) {
    Matrix m(2, 2);
    m(0, 0) = 0.5 * (alpha + a(2));
    m(1, 1) = 0.5 * (alpha - a(2));
    m(0, 1) = 0.5 * ops::Complex(a(0), -a(1));
    m(1, 0) = 0.5 * ops::Complex(a(0), a(1));
    return m;
}

PauliCoeffs pauli_decompose(const Matrix& a) {
    if (a.rows() != 2 || a.cols() != 2)
        throw std::invalid_argument("pauli_decompose: 2x2 matrix required");
    PauliCoeffs c;
    c.alpha = (a(0, 0) + a(1, 1)).real();
    c.a(0) = (a(0, 1) + a(1, 0)).real();
    c.a(1) = (a(1, 0) - a(0, 1)).imag();
    c.a(2) = (a(0, 0) - a(1, 1)).real();
    return c;
}

PauliCoeffs pauli_function(const std::function<double(double)>& f, double alpha, const Vec3& a) {
    const double n = a.norm();
    if (n == 0.0) return {2.0 * f(0.5 * alpha), Vec3::Zero()};
    const double f_plus = f(0.5 * (alpha + n));
    const double f_minus = f(0.5 * (alpha - n));
    return {f_plus + f_minus, (f_plus - f_minus) / n * a};
}

// --------------------------- nonlinearity weight -----------------------------

double mu(double m_norm) {
    if (!(m_norm >= 0.0) || m_norm >= 1.0)
        throw std::domain_error("mu: argument must lie in [0, 1)");
    if (m_norm < kSeriesSwitch) {
        const double m2 = m_norm * m_norm;
        return 1.0 / 3.0 + (4.0 / 45.0) * m2 + (44.0 / 945.0) * m2 * m2;
    }
    return 1.0 / (m_norm * m_norm) - 1.0 / (m_norm * std::atanh(m_norm));
}

double mu_derivative(double m_norm) {
    if (!(m_norm >= 0.0) || m_norm >= 1.0)
        throw std::domain_error("mu_derivative: argument must lie in [0, 1)");
    if (m_norm < kSeriesSwitch) {
        const double m2 = m_norm * m_norm;
        return (8.0 / 45.0) * m_norm + (176.0 / 945.0) * m2 * m_norm;
    }
    const double at = std::atanh(m_norm);
    const double mat = m_norm * at;
    return -2.0 / (m_norm * m_norm * m_norm)
           + (at + m_norm / (1.0 - m_norm * m_norm)) / (mat * mat);
}

namespace {

// continuous extension onto the sphere: mu -> 1 as m -> 1 (the pure-state
// value of the nonlinear weight), and clamped there for roundoff overshoots
double mu_extended(double m_norm) {
    return m_norm >= 1.0 ? 1.0 : mu(m_norm);
}

} // namespace

Vec3 nonlinear_part_vector(const Vec3& m, const Vec3& a) {
    const double m2 = m.squaredNorm();
    return -mu_extended(m.norm()) * (m2 * a - m.dot(a) * m);
}

// --------------------------- Bloch dynamics ----------------------------------

void TwoLevelParams::validate() const {
    if (!(omega > 0.0)) throw std::invalid_argument("TwoLevelParams: omega must be positive");
    if (gamma0 < 0.0) throw std::invalid_argument("TwoLevelParams: gamma0 must be nonnegative");
    if (!(kT > 0.0)) throw std::invalid_argument("TwoLevelParams: kT must be positive");
    if (longitudinal_weight() < 0.0)
        throw std::invalid_argument("TwoLevelParams: longitudinal weight must be nonnegative");
}

namespace {

// relaxation matrix, including an optional sigma_3 coupling of weight w3:
//   (1/2)[(1 + w3) (1 - q3 q3^T) + 2 q3 q3^T]  -> R of the anisotropic case
//   at w3 = 0 and the unit matrix at w3 = 1
Vec3 relaxation_term(const Vec3& m, const TwoLevelParams& p, double rate_factor) {
    const double w3 = p.longitudinal_weight();
    return p.gamma0 * rate_factor
           * Vec3((1.0 + w3) * m(0), (1.0 + w3) * m(1), 2.0 * m(2));
}

Vec3 precession(const Vec3& m, const TwoLevelParams& p) {
    return p.omega * q3.cross(m);
}

} // namespace

Vec3 bloch_rhs(const Vec3& m, const TwoLevelParams& p) {
    p.validate();
    const double m2 = m.squaredNorm();
    const Vec3 pump_nl = -p.gamma0 * q3
                         + p.gamma0 * 0.5 * mu_extended(m.norm()) * (m2 * q3 + m(2) * m);
    return precession(m, p) - relaxation_term(m, p, p.kT / p.omega) + pump_nl;
}

Vec3 bloch_equilibrium(const TwoLevelParams& p) {
    p.validate();
    return -q3 * std::tanh(0.5 * p.omega / p.kT);
}

Vec3 bloch_rhs_linear(const Vec3& m, const TwoLevelParams& p) {
    p.validate();
    return precession(m, p) - relaxation_term(m, p, p.kT / p.omega) - p.gamma0 * q3;
}

Vec3 bloch_rhs_lindblad(const Vec3& m, const TwoLevelParams& p) {
    p.validate();
    // 2kT/hw -> coth(hw/2kT)
    const double rate_factor = 0.5 / std::tanh(0.5 * p.omega / p.kT);
    return precession(m, p) - relaxation_term(m, p, rate_factor) - p.gamma0 * q3;
}

Mat3 bloch_linearized_matrix(const TwoLevelParams& p) {
    p.validate();
    const double w3 = p.longitudinal_weight();
    const double m_eq = std::tanh(0.5 * p.omega / p.kT); // magnitude of the equilibrium vector
    const double mu_eq = mu(m_eq);
    const double dmu_eq = mu_derivative(m_eq);

    Mat3 j = Mat3::Zero();
    j(0, 1) = -p.omega;
    j(1, 0) = p.omega;

    const double relax = p.gamma0 * p.kT / p.omega;
    j(0, 0) -= relax * (1.0 + w3);
    j(1, 1) -= relax * (1.0 + w3);
    j(2, 2) -= relax * 2.0;

    // nonlinear terms: -gamma0 (m_eq mu/2)(1 + 3 q3 q3^T) - gamma0 m_eq^2 mu' q3 q3^T
    const double diag = p.gamma0 * 0.5 * m_eq * mu_eq;
    j(0, 0) -= diag;
    j(1, 1) -= diag;
    j(2, 2) -= 4.0 * diag + p.gamma0 * m_eq * m_eq * dmu_eq;
    return j;
}

// --------------------------- density-matrix bridge ---------------------------

Matrix density_from_bloch(const Vec3& m) {
    if (m.norm() > 1.0 + 1e-12)
        throw std::invalid_argument("density_from_bloch: |m| must not exceed 1");
    return pauli_compose(1.0, m);
}

Vec3 bloch_from_density(const Matrix& rho) {
    return pauli_decompose(rho).a;
}

meq::SystemSpec make_spec(const TwoLevelParams& p, double hbar) {
    p.validate();
    meq::SystemSpec spec;
    spec.hbar = hbar;
    spec.hamiltonian = pauli_compose(0.0, hbar * p.omega * q3);
    spec.couplings = {pauli_compose(0.0, Vec3(1, 0, 0)), pauli_compose(0.0, Vec3(0, 1, 0))};
    spec.coupling_weights = {1.0, 1.0};
    if (p.longitudinal_weight() > 0.0) {
        spec.couplings.push_back(pauli_compose(0.0, q3));
        spec.coupling_weights.push_back(p.longitudinal_weight());
    }
    return spec;
}

meq::BathState make_bath(const TwoLevelParams& p, double hbar) {
    p.validate();
    return meq::BathState::emission(p.gamma0, p.kT, hbar, p.omega);
}

} // namespace tqme::twolevel
