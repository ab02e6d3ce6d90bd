#include "tqme/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqme::ops {

void check_same_dim(const Matrix& a, const Matrix& b, const char* where) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch ("
                                    + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs "
                                    + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
    }
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    check_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
    check_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

Matrix hermitize(const Matrix& a) {
    return 0.5 * (a + a.adjoint());
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double expectation(const Matrix& a, const Matrix& rho) {
    check_same_dim(a, rho, "expectation");
    return (a * rho).trace().real();
}

double min_eigenvalue(const Matrix& herm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("min_eigenvalue: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

bool is_density(const Matrix& rho, double trace_tol, double eig_tol) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
    if (!is_hermitian(rho, 1e-12)) return false;
    if (std::abs(rho.trace().real() - 1.0) > trace_tol) return false;
    return min_eigenvalue(hermitize(rho)) >= -eig_tol;
}

void validate_density(const Matrix& rho, double trace_tol, double eig_tol) {
    if (rho.rows() != rho.cols() || rho.rows() == 0)
        throw std::invalid_argument("validate_density: matrix must be square and non-empty");
    if (!is_hermitian(rho, 1e-12))
        throw std::invalid_argument("validate_density: matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > trace_tol)
        throw std::invalid_argument("validate_density: trace differs from 1");
    if (min_eigenvalue(hermitize(rho)) < -eig_tol)
        throw std::invalid_argument("validate_density: negative eigenvalue");
}

Matrix canonical_state(const Matrix& hamiltonian, double kT) {
    if (kT <= 0.0) throw std::invalid_argument("canonical_state: kT must be positive");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
    if (es.info() != Eigen::Success) throw std::runtime_error("canonical_state: eigensolver failed");
    const Eigen::VectorXd& energies = es.eigenvalues();
    const double e_min = energies.minCoeff();
    Eigen::VectorXd weights(energies.size());
    for (Eigen::Index n = 0; n < energies.size(); ++n)
        weights(n) = std::exp(-(energies(n) - e_min) / kT);
    weights /= weights.sum();
    return es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().adjoint();
}

// --------------------------- spectral decomposition --------------------------

Matrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

namespace {

// rotate so the largest-magnitude entry is real positive
void fix_column_phase(Eigen::Ref<Vector> col) {
    Eigen::Index imax = 0;
    double amax = 0.0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        const double a = std::abs(col(i));
        if (a > amax) { amax = a; imax = i; }
    }
    if (amax == 0.0) return;
    col *= std::conj(col(imax)) / amax;
}

// order for equal eigenvalues: first differing component of the gauge-fixed
// columns decides (real part, then imaginary part, larger first)
bool column_before(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() > b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() > b(i).imag();
    }
    return false;
}

} // namespace

SpectralDecomposition spectral_decompose(const Matrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0)
        throw std::invalid_argument("spectral_decompose: matrix must be square and non-empty");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_decompose: eigensolver failed to converge");

    const Eigen::Index d = rho.rows();
    SpectralDecomposition sd;
    sd.eigenvalues.resize(d);
    sd.eigenvectors.resize(d, d);
    // Eigen returns ascending order; flip to descending
    for (Eigen::Index k = 0; k < d; ++k) {
        sd.eigenvalues(k) = es.eigenvalues()(d - 1 - k);
        sd.eigenvectors.col(k) = es.eigenvectors().col(d - 1 - k);
        fix_column_phase(sd.eigenvectors.col(k));
    }
    // stable tie-break among exactly equal eigenvalues
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        for (Eigen::Index j = k + 1; j < d && sd.eigenvalues(j) == sd.eigenvalues(k); ++j) {
            if (column_before(sd.eigenvectors.col(j), sd.eigenvectors.col(k))) {
                sd.eigenvectors.col(j).swap(sd.eigenvectors.col(k));
            }
        }
    }
    return sd;
}

// --------------------------- conditional operator ----------------------------

double log_weight_factor(double p_m, double p_n) {
    if (p_m < kEigenvalueFloor || p_n < kEigenvalueFloor) {
        // vanishing-eigenvalue limit: p/(ln p - ln 0) -> 0
        return 0.0;
    }
    const double delta = std::log(p_m) - std::log(p_n);
    if (std::abs(delta) < kDegenerateLogGap) {
        // (p_m - p_n)/(ln p_m - ln p_n) = (p_m + p_n)/2 * (1 - delta^2/12 + ...)
        return 0.5 * (p_m + p_n) * (1.0 - delta * delta / 12.0);
    }
    return (p_m - p_n) / delta;
}

Matrix conditional_operator(const Matrix& a, const SpectralDecomposition& sd) {
    if (a.rows() != a.cols() || a.rows() != sd.dim())
        throw std::invalid_argument("conditional_operator: dimension mismatch");
    Matrix elems = sd.eigenvectors.adjoint() * a * sd.eigenvectors;
    for (Eigen::Index m = 0; m < sd.dim(); ++m)
        for (Eigen::Index n = 0; n < sd.dim(); ++n)
            elems(m, n) *= log_weight_factor(sd.eigenvalues(m), sd.eigenvalues(n));
    return sd.eigenvectors * elems * sd.eigenvectors.adjoint();
}

Matrix nonlinear_part(const Matrix& a, const SpectralDecomposition& sd) {
    const Matrix rho = sd.reconstruct();
    return 2.0 * conditional_operator(a, sd) - (a * rho + rho * a);
}

Matrix operator_log(const SpectralDecomposition& sd, double floor) {
    if (floor <= 0.0) throw std::invalid_argument("operator_log: floor must be positive");
    Eigen::VectorXd logs(sd.dim());
    for (Eigen::Index n = 0; n < sd.dim(); ++n)
        logs(n) = std::log(std::max(sd.eigenvalues(n), floor));
    return sd.eigenvectors * logs.asDiagonal() * sd.eigenvectors.adjoint();
}

double canonical_correlation(const Matrix& a, const Matrix& b,
                             const SpectralDecomposition& sd) {
    check_same_dim(a, b, "canonical_correlation");
    if (a.rows() != sd.dim())
        throw std::invalid_argument("canonical_correlation: dimension mismatch with decomposition");
    const Matrix a_e = sd.eigenvectors.adjoint() * a * sd.eigenvectors;
    const Matrix b_e = sd.eigenvectors.adjoint() * b * sd.eigenvectors;
    Complex acc(0.0, 0.0);
    for (Eigen::Index m = 0; m < sd.dim(); ++m)
        for (Eigen::Index n = 0; n < sd.dim(); ++n)
            acc += log_weight_factor(sd.eigenvalues(m), sd.eigenvalues(n)) * a_e(m, n) * b_e(n, m);
    return acc.real();
}

} // namespace tqme::ops
