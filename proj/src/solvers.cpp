#include "tqme/solvers.hpp"

#include "tqme/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace tqme::solve {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("SolverConfig: t_end must be nonnegative");
    if (record_stride < 1) throw std::invalid_argument("SolverConfig: record_stride must be >= 1");
    if (!(gap_floor > 0.0)) throw std::invalid_argument("SolverConfig: gap_floor must be positive");
}

bool Trajectory::has_series(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& Trajectory::series_named(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return series[k];
    throw std::out_of_range("Trajectory: no series named '" + name + "'");
}

RhsBuilder make_rhs_builder(meq::EquationKind kind, meq::SystemSpec spec,
                            Matrix momentum, double mass) {
    spec.validate();
    switch (kind) {
    case meq::EquationKind::thermodynamic:
        return [spec = std::move(spec)](const Matrix& rho, const ops::SpectralDecomposition* sd,
                                        const meq::BathState& bath) {
            if (sd) return meq::rhs_thermodynamic(*sd, spec, bath);
            return meq::rhs_thermodynamic(ops::spectral_decompose(rho), spec, bath);
        };
    case meq::EquationKind::linearized:
        return [spec = std::move(spec)](const Matrix& rho, const ops::SpectralDecomposition*,
                                        const meq::BathState& bath) {
            return meq::rhs_linearized(rho, spec, bath);
        };
    case meq::EquationKind::caldeira_leggett:
        if (momentum.size() == 0)
            throw std::invalid_argument("make_rhs_builder: momentum operator required for caldeira_leggett");
        return [spec = std::move(spec), momentum = std::move(momentum), mass](
                   const Matrix& rho, const ops::SpectralDecomposition*, const meq::BathState& bath) {
            return meq::rhs_caldeira_leggett(rho, spec, bath, momentum, mass);
        };
    }
    throw std::logic_error("make_rhs_builder: unknown equation kind");
}

// --------------------------- internal steppers -------------------------------

namespace {

// extended states carry the bath energy; its derivative is zero when the bath
// is held fixed

struct DirectState {
    Matrix rho;
    double energy;
};

// f(rho, energy) -> (d rho/dt, d energy/dt)
using DirectRhs = std::function<std::pair<Matrix, double>(const Matrix&, double)>;

DirectState direct_rk4(const DirectState& y, const DirectRhs& f, double dt,
                       double positivity_floor, double renorm_tol) {
    const auto [k1, e1] = f(y.rho, y.energy);
    const auto [k2, e2] = f(y.rho + (0.5 * dt) * k1, y.energy + 0.5 * dt * e1);
    const auto [k3, e3] = f(y.rho + (0.5 * dt) * k2, y.energy + 0.5 * dt * e2);
    const auto [k4, e4] = f(y.rho + dt * k3, y.energy + dt * e3);

    DirectState out;
    out.rho = y.rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.energy = y.energy + (dt / 6.0) * (e1 + 2.0 * (e2 + e3) + e4);

    out.rho = ops::hermitize(out.rho);
    const double tr = out.rho.trace().real();
    if (std::abs(tr - 1.0) > renorm_tol)
        throw NonPhysicalState("direct step: trace drifted to " + std::to_string(tr)
                               + " (right-hand side not traceless?)");
    out.rho /= tr;

    const double p_min = ops::min_eigenvalue(out.rho);
    if (p_min < positivity_floor)
        throw NonPhysicalState("direct step: positivity violated, min eigenvalue "
                               + std::to_string(p_min));
    return out;
}

struct EigState {
    Eigen::VectorXd p;
    Matrix v;
    double energy;
};

struct EigDeriv {
    Eigen::VectorXd dp;
    Matrix dv;
    double de;
};

// f(sd, energy) -> (irreversible operator R, d energy/dt)
using EigRhs = std::function<std::pair<Matrix, double>(const ops::SpectralDecomposition&, double)>;

void check_gaps(const Eigen::VectorXd& p, double gap_floor) {
    for (Eigen::Index m = 0; m < p.size(); ++m)
        for (Eigen::Index n = m + 1; n < p.size(); ++n)
            if (std::abs(p(m) - p(n)) < gap_floor)
                throw DegenerateSpectrum("eigenvalue gap |p_" + std::to_string(m) + " - p_"
                                         + std::to_string(n) + "| below gap floor");
}

EigDeriv eig_deriv(const EigState& y, const EigRhs& f, const Matrix& hamiltonian,
                   double hbar, double gap_floor) {
    check_gaps(y.p, gap_floor);
    const ops::SpectralDecomposition sd{y.p, y.v};
    const auto [r, de] = f(sd, y.energy);
    const Matrix r_eig = y.v.adjoint() * r * y.v;

    EigDeriv d;
    d.dp.resize(y.p.size());
    for (Eigen::Index n = 0; n < y.p.size(); ++n) d.dp(n) = r_eig(n, n).real();

    d.dv = (ops::Complex(0.0, -1.0) / hbar) * (hamiltonian * y.v);
    for (Eigen::Index n = 0; n < y.p.size(); ++n)
        for (Eigen::Index m = 0; m < y.p.size(); ++m)
            if (m != n) d.dv.col(n) += y.v.col(m) * (r_eig(m, n) / (y.p(n) - y.p(m)));
    d.de = de;
    return d;
}

void gram_schmidt(Matrix& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i)
            v.col(j) -= v.col(i).dot(v.col(j)) * v.col(i);
        const double nrm = v.col(j).norm();
        if (nrm < 0.5)
            throw NonPhysicalState("eigenvector re-orthonormalization collapsed");
        v.col(j) /= nrm;
    }
}

double orthonormality_defect(const Matrix& v) {
    const Matrix g = v.adjoint() * v;
    return (g - Matrix::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff();
}

EigState eig_rk4(const EigState& y, const EigRhs& f, const Matrix& hamiltonian, double hbar,
                 double dt, double gap_floor, double positivity_floor, double renorm_tol) {
    const EigDeriv d1 = eig_deriv(y, f, hamiltonian, hbar, gap_floor);
    const EigDeriv d2 = eig_deriv({y.p + 0.5 * dt * d1.dp, y.v + (0.5 * dt) * d1.dv,
                                   y.energy + 0.5 * dt * d1.de},
                                  f, hamiltonian, hbar, gap_floor);
    const EigDeriv d3 = eig_deriv({y.p + 0.5 * dt * d2.dp, y.v + (0.5 * dt) * d2.dv,
                                   y.energy + 0.5 * dt * d2.de},
                                  f, hamiltonian, hbar, gap_floor);
    const EigDeriv d4 = eig_deriv({y.p + dt * d3.dp, y.v + dt * d3.dv, y.energy + dt * d3.de},
                                  f, hamiltonian, hbar, gap_floor);

    EigState out;
    out.p = y.p + (dt / 6.0) * (d1.dp + 2.0 * (d2.dp + d3.dp) + d4.dp);
    out.v = y.v + (dt / 6.0) * (d1.dv + 2.0 * (d2.dv + d3.dv) + d4.dv);
    out.energy = y.energy + (dt / 6.0) * (d1.de + 2.0 * (d2.de + d3.de) + d4.de);

    gram_schmidt(out.v);
    const double sum = out.p.sum();
    if (std::abs(sum - 1.0) > renorm_tol)
        throw NonPhysicalState("eigensystem step: eigenvalue sum drifted to " + std::to_string(sum));
    out.p /= sum;
    if (out.p.minCoeff() < positivity_floor)
        throw NonPhysicalState("eigensystem step: positivity violated, min eigenvalue "
                               + std::to_string(out.p.minCoeff()));
    return out;
}

} // namespace

// --------------------------- public single steps -----------------------------

Matrix step_direct(const Matrix& rho, const std::function<Matrix(const Matrix&)>& rhs_total,
                   double dt, double positivity_floor) {
    const DirectRhs f = [&](const Matrix& r, double) { return std::pair{rhs_total(r), 0.0}; };
    return direct_rk4({rho, 0.0}, f, dt, positivity_floor, 1e-6).rho;
}

ops::SpectralDecomposition step_eigensystem(
    const ops::SpectralDecomposition& sd,
    const std::function<Matrix(const ops::SpectralDecomposition&)>& irreversible,
    const Matrix& hamiltonian, double hbar, double dt,
    double gap_floor, double positivity_floor) {
    const EigRhs f = [&](const ops::SpectralDecomposition& s, double) {
        return std::pair{irreversible(s), 0.0};
    };
    const EigState out = eig_rk4({sd.eigenvalues, sd.eigenvectors, 0.0}, f, hamiltonian, hbar,
                                 dt, gap_floor, positivity_floor, 1e-6);
    return {out.p, out.v};
}

// --------------------------- evolve ------------------------------------------

Trajectory evolve(const Matrix& rho0, const meq::SystemSpec& spec,
                  const meq::BathState& bath0, const RhsBuilder& rhs,
                  const SolverConfig& cfg, const EvolveOptions& opts) {
    cfg.validate();
    spec.validate();
    ops::validate_density(rho0);
    if (opts.back_reaction && !std::isfinite(bath0.heat_capacity))
        throw std::invalid_argument("evolve: back-reaction requires a finite bath heat capacity");

    const long n_steps =
        cfg.t_end <= 0.0 ? 0 : std::max<long>(1, std::llround(cfg.t_end / cfg.dt));
    const bool eig_method = cfg.method == Method::eigensystem;

    Trajectory traj;
    for (const auto& obs : opts.observables) traj.names.push_back(obs.name);
    traj.series.assign(opts.observables.size(), {});

    meq::BathState bath = bath0;
    Matrix rho = rho0;
    ops::SpectralDecomposition sd;
    if (eig_method) sd = ops::spectral_decompose(rho0);

    auto record = [&](double t) {
        const ops::SpectralDecomposition sample_sd = eig_method ? sd : ops::spectral_decompose(rho);
        const Matrix sample_rho = eig_method ? sd.reconstruct() : rho;
        const meq::RhsParts parts = rhs(sample_rho, &sample_sd, bath);
        const EvolveSample sample{t, sample_rho, sample_sd, parts, bath};
        traj.times.push_back(t);
        for (std::size_t k = 0; k < opts.observables.size(); ++k)
            traj.series[k].push_back(opts.observables[k].fn(sample));
        if (opts.store_snapshots) {
            traj.snapshot_times.push_back(t);
            traj.snapshots.push_back(sample_rho);
        }
    };

    // stage derivatives; the bath argument is resolved from the running energy
    // only when back-reaction is on
    const auto bath_at = [&](double e) { return opts.back_reaction ? bath.at_energy(e) : bath; };
    const DirectRhs direct_f = [&](const Matrix& r, double e) {
        const meq::RhsParts parts = rhs(r, nullptr, bath_at(e));
        const double de =
            opts.back_reaction ? -(spec.hamiltonian * parts.irreversible).trace().real() : 0.0;
        return std::pair{parts.total(), de};
    };
    const EigRhs eig_f = [&](const ops::SpectralDecomposition& s, double e) {
        const meq::RhsParts parts = rhs(s.reconstruct(), &s, bath_at(e));
        const double de =
            opts.back_reaction ? -(spec.hamiltonian * parts.irreversible).trace().real() : 0.0;
        return std::pair{parts.irreversible, de};
    };

    record(0.0);

    for (long k = 1; k <= n_steps; ++k) {
        try {
            if (eig_method) {
                try {
                    EigState next = eig_rk4({sd.eigenvalues, sd.eigenvectors, bath.energy}, eig_f,
                                            spec.hamiltonian, spec.hbar, cfg.dt, cfg.gap_floor,
                                            cfg.positivity_floor, cfg.renorm_tol);
                    if (orthonormality_defect(next.v) > cfg.orth_tol)
                        throw NonPhysicalState("eigensystem step: orthonormality drift above tolerance");
                    sd.eigenvalues = std::move(next.p);
                    sd.eigenvectors = std::move(next.v);
                    if (opts.back_reaction) bath = bath.at_energy(next.energy);
                } catch (const DegenerateSpectrum&) {
                    // near-degenerate spectrum: advance rho directly, then re-decompose
                    DirectState next = direct_rk4({sd.reconstruct(), bath.energy}, direct_f, cfg.dt,
                                                  cfg.positivity_floor, cfg.renorm_tol);
                    sd = ops::spectral_decompose(next.rho);
                    if (opts.back_reaction) bath = bath.at_energy(next.energy);
                }
            } else {
                DirectState next = direct_rk4({rho, bath.energy}, direct_f, cfg.dt,
                                              cfg.positivity_floor, cfg.renorm_tol);
                rho = std::move(next.rho);
                if (opts.back_reaction) bath = bath.at_energy(next.energy);
            }
        } catch (const NonPhysicalState& err) {
            throw NonPhysicalState(std::string(err.what()) + " at t = " + std::to_string(k * cfg.dt));
        }
        if (k % cfg.record_stride == 0 || k == n_steps) record(k * cfg.dt);
    }
    return traj;
}

} // namespace tqme::solve
