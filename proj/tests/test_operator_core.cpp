#include "tqme/operator_core.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tqme;
using ops::Complex;
using ops::Matrix;

namespace {

Matrix pauli_literal(int j) {
    Matrix s(2, 2);
    if (j == 1) s << 0, 1, 1, 0;
    if (j == 2) s << 0, Complex(0, -1), Complex(0, 1), 0;
    if (j == 3) s << 1, 0, 0, -1;
    return s;
}

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("commutator basics") {
    std::mt19937 rng(101);
    const Matrix a = oracle::random_hermitian(4, rng);
    CHECK(max_abs(ops::commutator(a, a)) < 1e-14);

    // [sigma1, sigma2] = 2i sigma3 by direct 2x2 multiplication
    const Matrix lhs = ops::commutator(pauli_literal(1), pauli_literal(2));
    CHECK(max_abs(lhs - Complex(0, 2) * pauli_literal(3)) < 1e-15);

    CHECK_THROWS_AS(ops::commutator(a, Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("commutator matches the truncated oscillator pattern") {
    // N = 2 truncated oscillator, unit mass/frequency: [Q,H] is tridiagonal
    // with +sqrt(n) above and -sqrt(n) below, scaled by sqrt(hbar^3 w / 2m)
    const double scale_q = std::sqrt(0.5);
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.5, 1.5, 2.5;
    Matrix q = Matrix::Zero(3, 3);
    q(0, 1) = q(1, 0) = scale_q;
    q(1, 2) = q(2, 1) = scale_q * std::sqrt(2.0);

    Matrix expected = Matrix::Zero(3, 3);
    const double s = std::sqrt(0.5); // sqrt(hbar^3 omega / 2m)
    expected(0, 1) = s;
    expected(1, 0) = -s;
    expected(1, 2) = s * std::sqrt(2.0);
    expected(2, 1) = -s * std::sqrt(2.0);
    CHECK(max_abs(ops::commutator(q, h) - expected) < 1e-14);
}

TEST_CASE("anticommutator basics") {
    std::mt19937 rng(102);
    const Matrix b = oracle::random_hermitian(3, rng);
    CHECK(max_abs(ops::anticommutator(Matrix::Identity(3, 3), b) - 2.0 * b) < 1e-14);
    CHECK(max_abs(ops::anticommutator(pauli_literal(1), pauli_literal(1))
                  - 2.0 * Matrix::Identity(2, 2)) < 1e-15);
    CHECK(max_abs(ops::anticommutator(pauli_literal(1), pauli_literal(2))) < 1e-15);

    const Matrix c = oracle::random_hermitian(3, rng);
    CHECK(ops::is_hermitian(ops::anticommutator(b, c), 1e-12));
    CHECK_THROWS_AS(ops::anticommutator(b, Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("spectral decomposition of diagonal and analytic states") {
    Matrix rho = Matrix::Zero(2, 2);
    rho.diagonal() << 0.7, 0.3;
    auto sd = ops::spectral_decompose(rho);
    CHECK(sd.eigenvalues(0) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(sd.eigenvalues(1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(max_abs(sd.eigenvectors - Matrix::Identity(2, 2)) < 1e-12);

    const Matrix mixed = Matrix::Identity(4, 4) / 4.0;
    auto sd_mixed = ops::spectral_decompose(mixed);
    for (int n = 0; n < 4; ++n) CHECK(sd_mixed.eigenvalues(n) == doctest::Approx(0.25));
    CHECK(max_abs(sd_mixed.reconstruct() - mixed) < 1e-12);

    // rho = (I + 0.5 sigma1)/2: p = (0.75, 0.25), eigenvectors (1, +-1)/sqrt2
    const Matrix rho_x = 0.5 * (Matrix::Identity(2, 2) + 0.5 * pauli_literal(1));
    auto sd_x = ops::spectral_decompose(rho_x);
    CHECK(sd_x.eigenvalues(0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(sd_x.eigenvalues(1) == doctest::Approx(0.25).epsilon(1e-12));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(max_abs(sd_x.eigenvectors.col(0) - (Eigen::Vector2cd() << r, r).finished()) < 1e-12);
    CHECK(max_abs(sd_x.eigenvectors.col(1) - (Eigen::Vector2cd() << r, -r).finished()) < 1e-12);
}

TEST_CASE("spectral decomposition reconstructs random densities") {
    std::mt19937 rng(103);
    for (int d = 2; d <= 6; ++d) {
        const Matrix rho = oracle::random_density(d, rng);
        auto sd = ops::spectral_decompose(rho);
        CHECK((sd.eigenvectors.adjoint() * sd.eigenvectors - Matrix::Identity(d, d))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK(sd.eigenvalues.sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((sd.reconstruct() - rho).norm() < 1e-9);
        for (int n = 0; n + 1 < d; ++n) CHECK(sd.eigenvalues(n) >= sd.eigenvalues(n + 1));
        // fixed phase gauge: the dominant entry of every column is real positive
        for (int n = 0; n < d; ++n) {
            Eigen::Index imax = 0;
            sd.eigenvectors.col(n).cwiseAbs().maxCoeff(&imax);
            CHECK(sd.eigenvectors(imax, n).imag() == doctest::Approx(0.0).scale(1).epsilon(1e-12));
            CHECK(sd.eigenvectors(imax, n).real() > 0.0);
        }
    }
}

TEST_CASE("log weight factor values and limits") {
    CHECK(ops::log_weight_factor(0.5, 0.5) == 0.5);
    CHECK(ops::log_weight_factor(0.5, 0.25) == doctest::Approx(0.36067376022224085).epsilon(1e-12));
    CHECK(ops::log_weight_factor(1.0, 0.0) == 0.0);
    CHECK(ops::log_weight_factor(0.0, 0.5) == 0.0);
    CHECK(ops::log_weight_factor(0.0, 0.0) == 0.0);
    CHECK(ops::log_weight_factor(0.5, 1e-31) == 0.0); // below the floor counts as vanished

    // both branches agree with the series value near the switch point, up to
    // the cancellation noise that motivates the series branch
    const double p = 0.4;
    for (const double delta : {0.5e-8, 2.0e-8}) {
        const double pn = p * std::exp(-delta);
        const double series = 0.5 * (p + pn) * (1.0 - delta * delta / 12.0);
        CHECK(std::abs(ops::log_weight_factor(p, pn) - series) < 1e-8 * p);
    }
}

TEST_CASE("log weight factor inequality chain") {
    const double grid[] = {1e-12, 1e-6, 1e-3, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
    std::mt19937 rng(104);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    auto check_pair = [](double pm, double pn) {
        const double f = ops::log_weight_factor(pm, pn);
        const double mid = 0.5 * (pm + pn);
        CHECK(f >= 0.0);
        CHECK(f <= mid * (1.0 + 1e-14) + 1e-300);
        CHECK(mid <= 1.0);
        if (pm > 0 && pn > 0 && std::abs(std::log(pm) - std::log(pn)) > 1e-6) {
            CHECK(f < mid); // middle bound strict for distinct arguments
        }
        if (pm == pn) CHECK(f == mid);
    };

    for (double pm : grid)
        for (double pn : grid) check_pair(pm, pn);
    for (int rep = 0; rep < 1000; ++rep) check_pair(uni(rng), uni(rng));
}

TEST_CASE("conditional operator on commuting and mixed states") {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 1.0, 2.0, 3.0;
    Matrix rho = Matrix::Zero(3, 3);
    rho.diagonal() << 0.5, 0.3, 0.2;
    auto sd = ops::spectral_decompose(rho);
    CHECK(max_abs(ops::conditional_operator(a, sd) - a * rho) < 1e-14);

    std::mt19937 rng(105);
    const Matrix b = oracle::random_hermitian(4, rng);
    auto sd_mixed = ops::spectral_decompose(Matrix::Identity(4, 4) / 4.0);
    CHECK(max_abs(ops::conditional_operator(b, sd_mixed) - b / 4.0) < 1e-13);

    CHECK_THROWS_AS(ops::conditional_operator(Matrix::Identity(2, 2), sd), std::invalid_argument);
}

TEST_CASE("conditional operator matches the quadrature oracle") {
    std::mt19937 rng(106);
    for (int rep = 0; rep < 25; ++rep) {
        const Matrix a = oracle::random_hermitian(4, rng);
        const Matrix rho = oracle::random_density(4, rng);
        auto sd = ops::spectral_decompose(rho);
        const Matrix direct = ops::conditional_operator(a, sd);
        const Matrix quad = oracle::conditional_operator_quadrature(a, sd);
        CHECK((direct - quad).norm() < 1e-8);
        CHECK(ops::is_hermitian(direct, 1e-12));
        CHECK(std::abs((direct.trace() - (a * rho).trace()).real()) < 1e-12);
    }
}

TEST_CASE("conditional operator is linear in the observable") {
    std::mt19937 rng(107);
    const Matrix rho = oracle::random_density(5, rng);
    auto sd = ops::spectral_decompose(rho);
    const Matrix a = oracle::random_hermitian(5, rng);
    const Matrix b = oracle::random_hermitian(5, rng);
    const Matrix sum = ops::conditional_operator(a + b, sd);
    CHECK(max_abs(sum - ops::conditional_operator(a, sd) - ops::conditional_operator(b, sd))
          < 1e-12);
    const Matrix scaled = ops::conditional_operator(2.5 * a, sd);
    CHECK(max_abs(scaled - 2.5 * ops::conditional_operator(a, sd)) < 1e-12);
}

TEST_CASE("nonlinear part vanishes for commuting pairs and is traceless") {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << -1.0, 0.5, 2.0;
    Matrix rho = Matrix::Zero(3, 3);
    rho.diagonal() << 0.6, 0.3, 0.1;
    CHECK(max_abs(ops::nonlinear_part(a, ops::spectral_decompose(rho))) < 1e-13);

    std::mt19937 rng(108);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix h = oracle::random_hermitian(3, rng);
        const Matrix state = oracle::random_density(3, rng);
        auto sd = ops::spectral_decompose(state);
        const Matrix nl = ops::nonlinear_part(h, sd);
        CHECK(std::abs(nl.trace().real()) < 1e-12);
        CHECK(std::abs(nl.trace().imag()) < 1e-12);
        // independent route through the integral representation
        const Matrix quad = 2.0 * oracle::conditional_operator_quadrature(h, sd)
                            - (h * state + state * h);
        CHECK((nl - quad).norm() < 1e-8);
    }
}

TEST_CASE("operator log of canonical, mixed, and pure states") {
    std::mt19937 rng(109);
    const Matrix h = oracle::random_hermitian(4, rng);
    const double kT = 0.7;
    const Matrix rho = ops::canonical_state(h, kT);
    auto sd = ops::spectral_decompose(rho);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    double z = 0.0;
    for (int n = 0; n < 4; ++n) z += std::exp(-es.eigenvalues()(n) / kT);
    const Matrix expected = -h / kT - std::log(z) * Matrix::Identity(4, 4);
    CHECK(max_abs(ops::operator_log(sd) - expected) < 1e-10);

    auto sd_mixed = ops::spectral_decompose(Matrix::Identity(2, 2) / 2.0);
    CHECK(max_abs(ops::operator_log(sd_mixed) + std::log(2.0) * Matrix::Identity(2, 2)) < 1e-13);

    Matrix pure = Matrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    const Matrix log_pure = ops::operator_log(ops::spectral_decompose(pure));
    CHECK(log_pure(0, 0).real() == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(log_pure(1, 1).real() == doctest::Approx(std::log(1e-30)).epsilon(1e-12));
}

TEST_CASE("canonical correlation special cases and oracle") {
    std::mt19937 rng(110);
    const Matrix rho = oracle::random_density(4, rng);
    auto sd = ops::spectral_decompose(rho);
    const Matrix a = oracle::random_hermitian(4, rng);
    const Matrix b = oracle::random_hermitian(4, rng);

    CHECK(ops::canonical_correlation(a, Matrix::Identity(4, 4), sd)
          == doctest::Approx((a * rho).trace().real()).epsilon(1e-12));
    CHECK(ops::canonical_correlation(a, b, sd)
          == doctest::Approx(ops::canonical_correlation(b, a, sd)).epsilon(1e-12));
    CHECK(ops::canonical_correlation(a, a, sd) >= 0.0);

    auto sd2 = ops::spectral_decompose(Matrix::Identity(2, 2) / 2.0);
    CHECK(ops::canonical_correlation(pauli_literal(3), pauli_literal(3), sd2)
          == doctest::Approx(1.0).epsilon(1e-12));

    const double quad = (oracle::conditional_operator_quadrature(a, sd) * b).trace().real();
    CHECK(ops::canonical_correlation(a, b, sd) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("commutator identity [A,rho] = [A_rho, ln rho]") {
    std::mt19937 rng(111);
    for (int d = 2; d <= 6; ++d) {
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix a = oracle::random_hermitian(d, rng);
            const Matrix rho = oracle::random_density(d, rng);
            auto sd = ops::spectral_decompose(rho);
            const Matrix lhs = ops::commutator(a, rho);
            const Matrix rhs = ops::commutator(ops::conditional_operator(a, sd),
                                               ops::operator_log(sd));
            CHECK((lhs - rhs).norm() < 1e-9);
        }
    }
}

TEST_CASE("canonical state and density validation") {
    std::mt19937 rng(112);
    const Matrix h = oracle::random_hermitian(5, rng);
    const Matrix rho = ops::canonical_state(h, 1.3);
    CHECK(ops::is_density(rho));
    CHECK(max_abs(ops::commutator(rho, h)) < 1e-12); // canonical states commute with H

    Matrix bad = rho;
    bad(0, 1) += Complex(0.0, 0.5);
    CHECK_FALSE(ops::is_density(bad));
    CHECK_THROWS_AS(ops::validate_density(bad), std::invalid_argument);
    CHECK_THROWS_AS(ops::canonical_state(h, -1.0), std::invalid_argument);
}
