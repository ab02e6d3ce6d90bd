#include "tqme/solvers.hpp"

#include "support/oracles.hpp"
#include "tqme/errors.hpp"
#include "tqme/oscillator.hpp"
#include "tqme/two_level.hpp"

#include <doctest.h>

#include <cmath>
#include <future>
#include <random>

using namespace tqme;
using ops::Complex;
using ops::Matrix;

namespace {

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

// evolve a 2x2 thermodynamic system for a fixed horizon with step dt
Matrix run_two_level(const Matrix& rho0, const twolevel::TwoLevelParams& p, double t_end,
                     double dt) {
    const meq::SystemSpec spec = twolevel::make_spec(p);
    const meq::BathState bath = twolevel::make_bath(p);
    const auto rhs = solve::make_rhs_builder(meq::EquationKind::thermodynamic, spec);
    Matrix rho = rho0;
    const long n = std::lround(t_end / dt);
    for (long k = 0; k < n; ++k)
        rho = solve::step_direct(rho, [&](const Matrix& r) { return rhs(r, nullptr, bath).total(); },
                                 dt);
    return rho;
}

} // namespace

TEST_CASE("free evolution keeps populations and rotates phases") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.0, 1.0, 2.5;
    Matrix rho = Matrix::Zero(3, 3);
    rho.diagonal() << 0.5, 0.3, 0.2;
    rho(0, 1) = rho(1, 0) = 0.1;
    rho(0, 2) = Complex(0.05, 0.02);
    rho(2, 0) = std::conj(rho(0, 2));

    const auto von_neumann = [&](const Matrix& r) {
        return ((Complex(0, 1)) * ops::commutator(r, h)).eval();
    };
    const Matrix rho0 = rho;
    const double dt = 1e-3;
    const int n = 1000; // t = 1
    for (int k = 0; k < n; ++k) rho = solve::step_direct(rho, von_neumann, dt);

    for (int i = 0; i < 3; ++i)
        CHECK(rho(i, i).real() == doctest::Approx(rho0(i, i).real()).epsilon(1e-10));
    // off-diagonals rotate at the Bohr frequencies: rho_mn(t) = e^{-i(E_m-E_n)t} rho_mn(0)
    const double t = n * dt;
    for (int m = 0; m < 3; ++m)
        for (int l = 0; l < 3; ++l) {
            if (m == l) continue;
            const Complex expected =
                std::exp(Complex(0, -(h(m, m).real() - h(l, l).real()) * t)) * rho0(m, l);
            CHECK(std::abs(rho(m, l) - expected) < 1e-8);
        }
}

TEST_CASE("direct solver tracks the Caldeira-Leggett moment solution") {
    osc::OscillatorParams p;
    p.n_max = 20; // big enough that truncation sits below the tolerance
    solve::SolverConfig sc;
    sc.dt = 1e-3;
    sc.t_end = 6.0;
    sc.record_stride = 50;
    const auto traj = osc::quench_experiment(p, meq::EquationKind::caldeira_leggett, sc);
    const auto& p2 = traj.series_named("p2");
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double exact = osc::cl_moment_solution(traj.times[i], p, p2[0]);
        CHECK(std::abs(p2[i] - exact) / std::abs(exact) < 1e-4);
    }
}

TEST_CASE("one-step consistency and fourth-order convergence") {
    twolevel::TwoLevelParams p;
    p.omega = 1.0;
    p.gamma0 = 0.5;
    p.kT = 0.4;
    const meq::SystemSpec spec = twolevel::make_spec(p);
    const meq::BathState bath = twolevel::make_bath(p);
    const auto rhs = solve::make_rhs_builder(meq::EquationKind::thermodynamic, spec);
    const auto total = [&](const Matrix& r) { return rhs(r, nullptr, bath).total(); };
    const Matrix rho0 = twolevel::density_from_bloch({0.6, 0.0, 0.3});

    // (rho(dt) - rho(0))/dt converges to the right-hand side at first order
    double prev_defect = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double dt = 0.02 / (1 << k);
        const Matrix quotient = (solve::step_direct(rho0, total, dt) - rho0) / dt;
        const double defect = (quotient - total(rho0)).norm();
        if (k > 0) CHECK(defect / prev_defect == doctest::Approx(0.5).epsilon(0.2));
        prev_defect = defect;
    }

    // Richardson slope of the one-step error against a fine reference is ~4
    double prev_err = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double dt = 0.08 / (1 << k);
        Matrix fine = rho0;
        for (int s = 0; s < 64; ++s) fine = solve::step_direct(fine, total, dt / 64.0);
        const double err = (solve::step_direct(rho0, total, dt) - fine).norm() / dt;
        if (k > 0) {
            const double slope = std::log2(prev_err / err);
            CHECK(slope >= 3.9);
            CHECK(slope <= 4.5);
        }
        prev_err = err;
    }

    // halving dt shrinks the global error by ~16
    const Matrix end_coarse = run_two_level(rho0, p, 2.0, 0.02);
    const Matrix end_half = run_two_level(rho0, p, 2.0, 0.01);
    const Matrix end_quarter = run_two_level(rho0, p, 2.0, 0.005);
    const double e1 = (end_coarse - end_half).norm();
    const double e2 = (end_half - end_quarter).norm();
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.3));
}

TEST_CASE("eigensystem step with zero dissipation is Schroedinger evolution") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.3, 1.1, 2.0;
    std::mt19937 rng(401);
    const Matrix rho0 = oracle::random_density(3, rng);
    auto sd = ops::spectral_decompose(rho0);
    const Eigen::VectorXd p0 = sd.eigenvalues;
    const Matrix v0 = sd.eigenvectors;

    const auto zero_r = [](const ops::SpectralDecomposition& s) {
        return Matrix::Zero(s.dim(), s.dim()).eval();
    };
    const double dt = 1e-2;
    const int n = 50;
    for (int k = 0; k < n; ++k) sd = solve::step_eigensystem(sd, zero_r, h, 1.0, dt);

    CHECK((sd.eigenvalues - p0).cwiseAbs().maxCoeff() < 1e-12);
    Matrix propagator = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        propagator(i, i) = std::exp(Complex(0, -h(i, i).real() * n * dt));
    CHECK(max_abs(sd.eigenvectors - propagator * v0) < 1e-8);
}

TEST_CASE("eigensystem step rejects degenerate spectra; evolve falls back") {
    ops::SpectralDecomposition sd;
    sd.eigenvalues = Eigen::Vector2d(0.5, 0.5);
    sd.eigenvectors = Matrix::Identity(2, 2);
    const auto zero_r = [](const ops::SpectralDecomposition& s) {
        return Matrix::Zero(s.dim(), s.dim()).eval();
    };
    CHECK_THROWS_AS(solve::step_eigensystem(sd, zero_r, Matrix::Identity(2, 2), 1.0, 1e-3),
                    DegenerateSpectrum);

    // a maximally mixed start is exactly degenerate: evolve must fall back to
    // a direct step and keep going
    twolevel::TwoLevelParams p;
    p.gamma0 = 0.1;
    p.kT = 0.5;
    const meq::SystemSpec spec = twolevel::make_spec(p);
    const meq::BathState bath = twolevel::make_bath(p);
    solve::SolverConfig sc;
    sc.method = solve::Method::eigensystem;
    sc.dt = 1e-3;
    sc.t_end = 0.1;
    solve::EvolveOptions opts;
    opts.observables.push_back({"p_0", [](const solve::EvolveSample& s) {
                                    return s.sd.eigenvalues(0);
                                }});
    const auto traj = solve::evolve(Matrix::Identity(2, 2) / 2.0, spec, bath,
                                    solve::make_rhs_builder(meq::EquationKind::thermodynamic, spec),
                                    sc, opts);
    CHECK(traj.times.size() > 1);
    CHECK(traj.series_named("p_0").back() > 0.5); // relaxation has begun
}

TEST_CASE("direct and eigensystem methods agree over a short quench") {
    osc::OscillatorParams p;
    solve::SolverConfig sc;
    sc.t_end = 5.0;
    const auto direct = osc::quench_experiment(p, meq::EquationKind::thermodynamic, sc);
    sc.method = solve::Method::eigensystem;
    const auto eig = osc::quench_experiment(p, meq::EquationKind::thermodynamic, sc);

    REQUIRE(direct.times.size() == eig.times.size());
    for (std::size_t k = 0; k < direct.names.size(); ++k)
        for (std::size_t i = 0; i < direct.times.size(); ++i)
            CHECK(std::abs(direct.series[k][i] - eig.series[k][i]) < 1e-6);
}

TEST_CASE("eigensystem reconstruction tracks the directly propagated state") {
    osc::OscillatorParams p;
    const meq::SystemSpec spec = osc::make_spec(p);
    const meq::BathState bath = osc::make_bath(p);
    const auto rhs = solve::make_rhs_builder(meq::EquationKind::thermodynamic, spec);
    solve::SolverConfig sc;
    sc.t_end = 5.0;
    sc.record_stride = 20;
    solve::EvolveOptions opts;
    opts.store_snapshots = true;

    const auto direct = solve::evolve(osc::initial_state(p), spec, bath, rhs, sc, opts);
    sc.method = solve::Method::eigensystem;
    const auto eig = solve::evolve(osc::initial_state(p), spec, bath, rhs, sc, opts);

    REQUIRE(direct.snapshots.size() == eig.snapshots.size());
    for (std::size_t i = 0; i < direct.snapshots.size(); ++i)
        CHECK((direct.snapshots[i] - eig.snapshots[i]).norm() < 1e-6);
}

TEST_CASE("zero coupling conserves energy along evolve") {
    osc::OscillatorParams p;
    p.n_max = 5;
    p.zeta = 0.0;
    solve::SolverConfig sc;
    sc.t_end = 2.0;
    const auto traj = osc::quench_experiment(p, meq::EquationKind::thermodynamic, sc);
    const auto& energy = traj.series_named("energy");
    for (double e : energy) CHECK(std::abs(e - energy.front()) < 1e-10);
}

TEST_CASE("positivity monitor raises NonPhysicalState with a timestamp") {
    // the mu = 0 master equation at low temperature pushes the state out of
    // the Bloch sphere; the monitor must catch it
    twolevel::TwoLevelParams p;
    p.omega = 1.0;
    p.gamma0 = 0.1;
    p.kT = 0.1;
    const meq::SystemSpec spec = twolevel::make_spec(p);
    const meq::BathState bath = twolevel::make_bath(p);
    solve::SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 40.0;
    try {
        solve::evolve(Matrix::Identity(2, 2) / 2.0, spec, bath,
                      solve::make_rhs_builder(meq::EquationKind::linearized, spec), sc, {});
        FAIL("expected NonPhysicalState");
    } catch (const NonPhysicalState& err) {
        CHECK(std::string(err.what()).find("at t =") != std::string::npos);
    }
}

TEST_CASE("evolve records t = 0, stride multiples, and the final step") {
    osc::OscillatorParams p;
    p.n_max = 3;
    solve::SolverConfig sc;
    sc.dt = 0.01;
    sc.t_end = 0.055; // llround(5.5) = 6 steps of 0.01
    sc.record_stride = 4;
    const auto traj = osc::quench_experiment(p, meq::EquationKind::linearized, sc);
    REQUIRE(traj.times.size() == 3);
    CHECK(traj.times[0] == 0.0);
    CHECK(traj.times[1] == doctest::Approx(0.04));
    CHECK(traj.times[2] == doctest::Approx(0.06));
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK_THROWS_AS(traj.series_named("nonexistent"), std::out_of_range);
}

TEST_CASE("independent runs can execute concurrently") {
    osc::OscillatorParams p;
    p.n_max = 3;
    solve::SolverConfig sc;
    sc.t_end = 1.0;
    const auto run_one = [&] {
        return osc::quench_experiment(p, meq::EquationKind::thermodynamic, sc);
    };
    auto fut_a = std::async(std::launch::async, run_one);
    auto fut_b = std::async(std::launch::async, run_one);
    const auto serial = run_one();
    const auto res_a = fut_a.get();
    const auto res_b = fut_b.get();
    for (const auto* traj : {&res_a, &res_b}) {
        REQUIRE(traj->times.size() == serial.times.size());
        for (std::size_t k = 0; k < serial.names.size(); ++k)
            for (std::size_t i = 0; i < serial.times.size(); ++i)
                CHECK(traj->series[k][i] == serial.series[k][i]);
    }
}

TEST_CASE("back-reaction conserves total energy and warms the bath") {
    osc::OscillatorParams p;
    solve::SolverConfig sc;
    sc.t_end = 10.0;
    const auto traj = osc::quench_experiment(p, meq::EquationKind::thermodynamic, sc, true, 10.0);
    const auto& e_sys = traj.series_named("energy");
    const auto& e_bath = traj.series_named("bath_energy");
    const double total0 = e_sys.front() + e_bath.front();
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        CHECK(std::abs(e_sys[i] + e_bath[i] - total0) < 1e-8);
    // the system cools into the bath, so the bath temperature rises
    CHECK(traj.series_named("bath_kT").back() > traj.series_named("bath_kT").front());
}
