// oscillator.hpp — Damped harmonic oscillator on a truncated Fock basis:
// operator construction, the bath-temperature quench experiment, the
// closed-form Caldeira-Leggett second moment, and the exact equilibrium value.

#pragma once

#include "tqme/master_equations.hpp"
#include "tqme/solvers.hpp"

namespace tqme::osc {

using ops::Matrix;

struct OscillatorParams {
    int n_max = 9;      // states |0> .. |n_max>
    double mass = 1.0;
    double omega = 1.0;
    double zeta = 0.1;  // friction coefficient
    double kT0 = 1.5;   // initial system temperature, energy units
    double kTe = 0.5;   // bath temperature, energy units
    double hbar = 1.0;

    void validate() const;
};

// H diagonal with (n + 1/2) hbar omega, Q tridiagonal with sqrt(n) couplings
// scaled by sqrt(hbar/2 m omega), [Q,H] evaluated on the truncated space,
// P = (m/i hbar)[Q,H], and P2 = P*P in the same basis.
struct OscillatorOperators {
    Matrix h;
    Matrix q;
    Matrix qh; // [Q,H], anti-Hermitian
    Matrix p;
    Matrix p2;
};

OscillatorOperators build_operators(const OscillatorParams& p);

// <P^2>_t for the Caldeira-Leggett equation started from a state whose
// eigenvectors coincide with the energy eigenstates:
//   m kTe + (p2_0 - m kTe)/Omega^2 * exp(-zeta t/m)
//     * [4w^2 - (zeta/m)^2 cos(Omega t) - (zeta/m) Omega sin(Omega t)],
// Omega = sqrt(4 w^2 - (zeta/m)^2). Underdamped branch only.
double cl_moment_solution(double t, const OscillatorParams& p, double p2_initial);

// exact equilibrium second moment (1/2) hbar omega m coth(hbar omega / 2 kTe)
double equilibrium_p2(const OscillatorParams& p);

// canonical state at kT0 truncated to the basis and renormalized
Matrix initial_state(const OscillatorParams& p);

meq::SystemSpec make_spec(const OscillatorParams& p);
meq::BathState make_bath(const OscillatorParams& p);

// Quench protocol: start canonical at kT0, evolve under the chosen equation
// with the bath at kTe. Records <P^2>, <H>, eigenvalues p_n, the first three
// Hamiltonian/density eigenstate overlaps, entropy rates, the minimum
// eigenvalue of rho, and the bath temperature.
solve::Trajectory quench_experiment(const OscillatorParams& p, meq::EquationKind equation,
                                    const solve::SolverConfig& solver,
                                    bool back_reaction = false,
                                    double heat_capacity = 0.0 /* <=0: infinite */);

} // namespace tqme::osc
