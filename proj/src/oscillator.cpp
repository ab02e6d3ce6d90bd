#include "tqme/oscillator.hpp"

#include "tqme/diagnostics.hpp"
#include "tqme/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqme::osc {

void OscillatorParams::validate() const {
    if (n_max < 1) throw std::invalid_argument("OscillatorParams: n_max must be >= 1");
    if (!(mass > 0.0)) throw std::invalid_argument("OscillatorParams: mass must be positive");
    if (!(omega > 0.0)) throw std::invalid_argument("OscillatorParams: omega must be positive");
    if (zeta < 0.0) throw std::invalid_argument("OscillatorParams: zeta must be nonnegative");
    if (!(kT0 > 0.0) || !(kTe > 0.0))
        throw std::invalid_argument("OscillatorParams: temperatures must be positive");
    if (!(hbar > 0.0)) throw std::invalid_argument("OscillatorParams: hbar must be positive");
}

OscillatorOperators build_operators(const OscillatorParams& p) {
    p.validate();
    const Eigen::Index d = p.n_max + 1;

    OscillatorOperators op;
    op.h = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        op.h(n, n) = p.hbar * p.omega * (static_cast<double>(n) + 0.5);

    op.q = Matrix::Zero(d, d);
    const double q_scale = std::sqrt(p.hbar / (2.0 * p.mass * p.omega));
    for (Eigen::Index n = 0; n + 1 < d; ++n) {
        const double coupling = q_scale * std::sqrt(static_cast<double>(n + 1));
        op.q(n, n + 1) = coupling;
        op.q(n + 1, n) = coupling;
    }

    op.qh = ops::commutator(op.q, op.h);
    op.p = (p.mass / (ops::Complex(0.0, 1.0) * p.hbar)) * op.qh;
    op.p2 = op.p * op.p;
    return op;
}

double cl_moment_solution(double t, const OscillatorParams& p, double p2_initial) {
    p.validate();
    const double gamma = p.zeta / p.mass;
    const double disc = 4.0 * p.omega * p.omega - gamma * gamma;
    if (disc <= 0.0)
        throw OverdampedUnsupported("cl_moment_solution: requires 4 omega^2 > (zeta/m)^2");
    const double big_omega = std::sqrt(disc);
    const double asymptote = p.mass * p.kTe;
    const double bracket = 4.0 * p.omega * p.omega
                           - gamma * gamma * std::cos(big_omega * t)
                           - gamma * big_omega * std::sin(big_omega * t);
    return asymptote + (p2_initial - asymptote) / disc * std::exp(-gamma * t) * bracket;
}

double equilibrium_p2(const OscillatorParams& p) {
    p.validate();
    return 0.5 * p.hbar * p.omega * p.mass / std::tanh(0.5 * p.hbar * p.omega / p.kTe);
}

Matrix initial_state(const OscillatorParams& p) {
    const OscillatorOperators op = build_operators(p);
    return ops::canonical_state(op.h, p.kT0);
}

meq::SystemSpec make_spec(const OscillatorParams& p) {
    const OscillatorOperators op = build_operators(p);
    meq::SystemSpec spec;
    spec.hamiltonian = op.h;
    spec.couplings = {op.q};
    spec.hbar = p.hbar;
    return spec;
}

meq::BathState make_bath(const OscillatorParams& p) {
    p.validate();
    return meq::BathState::friction(p.zeta, p.kTe, p.hbar);
}

solve::Trajectory quench_experiment(const OscillatorParams& p, meq::EquationKind equation,
                                    const solve::SolverConfig& solver,
                                    bool back_reaction, double heat_capacity) {
    p.validate();
    const OscillatorOperators op = build_operators(p);
    const meq::SystemSpec spec = make_spec(p);
    meq::BathState bath = make_bath(p);
    if (back_reaction || heat_capacity > 0.0) {
        if (!(heat_capacity > 0.0))
            throw std::invalid_argument("quench_experiment: back-reaction needs a heat capacity");
        bath = bath.with_heat_capacity(heat_capacity);
    }

    solve::EvolveOptions opts;
    opts.back_reaction = back_reaction;
    opts.observables.push_back({"p2", [p2 = op.p2](const solve::EvolveSample& s) {
                                    return ops::expectation(p2, s.rho);
                                }});
    opts.observables.push_back({"energy", [h = op.h](const solve::EvolveSample& s) {
                                    return ops::expectation(h, s.rho);
                                }});
    for (int n = 0; n <= p.n_max; ++n)
        opts.observables.push_back({"p_" + std::to_string(n), [n](const solve::EvolveSample& s) {
                                        return s.sd.eigenvalues(n);
                                    }});
    for (int j = 0; j < 3 && j <= p.n_max; ++j)
        // H is diagonal with ascending energies, so |<j|pi_j>| is one matrix element
        opts.observables.push_back({"overlap_" + std::to_string(j),
                                    [j](const solve::EvolveSample& s) {
                                        return std::abs(s.sd.eigenvectors(j, j));
                                    }});
    opts.observables.push_back({"entropy_rate_total", [spec](const solve::EvolveSample& s) {
                                    return diag::entropy_rate(s.sd, spec, s.bath,
                                                              s.rhs.irreversible).total_rate;
                                }});
    opts.observables.push_back({"entropy_rate_canonical", [spec](const solve::EvolveSample& s) {
                                    return diag::entropy_rate(s.sd, spec, s.bath,
                                                              s.rhs.irreversible).canonical_form_rate;
                                }});
    opts.observables.push_back({"rho_min_eig", [](const solve::EvolveSample& s) {
                                    return s.sd.eigenvalues.minCoeff();
                                }});
    opts.observables.push_back({"bath_kT", [](const solve::EvolveSample& s) {
                                    return s.bath.kT;
                                }});
    if (back_reaction)
        opts.observables.push_back({"bath_energy", [](const solve::EvolveSample& s) {
                                        return s.bath.energy;
                                    }});

    solve::RhsBuilder rhs =
        equation == meq::EquationKind::caldeira_leggett
            ? solve::make_rhs_builder(equation, spec, op.p, p.mass)
            : solve::make_rhs_builder(equation, spec);

    return solve::evolve(initial_state(p), spec, bath, rhs, solver, opts);
}

} // namespace tqme::osc
