// solvers.hpp — Fixed-step RK4 integration of the master equations, either on
// the density matrix directly or on the eigenvalues/eigenvectors of rho, with
// named-observable trajectory recording and optional bath back-reaction.

#pragma once

#include "tqme/master_equations.hpp"
#include "tqme/operator_core.hpp"

#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace tqme::solve {

using ops::Matrix;

enum class Method { direct, eigensystem };

struct SolverConfig {
    double dt = 1e-3 * 2.0 * std::numbers::pi; // natural default for omega = 1
    double t_end = 0.0;
    Method method = Method::direct;
    int record_stride = 10;
    double renorm_tol = 1e-9;
    double orth_tol = 1e-9;
    double gap_floor = 1e-8;          // eigensystem fallback threshold
    double positivity_floor = -1e-6;  // NonPhysicalState below this

    void validate() const;
};

// Named real time series plus optional density-matrix snapshots.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series; // series[k] belongs to names[k]
    std::vector<double> snapshot_times;
    std::vector<Matrix> snapshots;

    bool has_series(const std::string& name) const;
    const std::vector<double>& series_named(const std::string& name) const;
};

// State handed to observable callbacks at every recorded time.
struct EvolveSample {
    double t;
    const Matrix& rho;
    const ops::SpectralDecomposition& sd;
    const meq::RhsParts& rhs;
    const meq::BathState& bath;
};

struct Observable {
    std::string name;
    std::function<double(const EvolveSample&)> fn;
};

// Equation family bound to a system; sd is non-null when the caller already
// holds the decomposition of rho (the eigensystem propagator does).
using RhsBuilder = std::function<meq::RhsParts(
    const Matrix& rho, const ops::SpectralDecomposition* sd, const meq::BathState& bath)>;

RhsBuilder make_rhs_builder(meq::EquationKind kind, meq::SystemSpec spec,
                            Matrix momentum = Matrix(), double mass = 1.0);

// --------------------------- single steps -----------------------------------

// Classical RK4 step of d rho/dt = f(rho); afterwards the result is
// re-Hermitized and trace-renormalized. Positivity is monitored, not
// enforced: min eigenvalue below positivity_floor throws NonPhysicalState.
Matrix step_direct(const Matrix& rho, const std::function<Matrix(const Matrix&)>& rhs_total,
                   double dt, double positivity_floor = -1e-6);

// RK4 step of the coupled eigensystem equations
//   dp_n/dt     = <pi_n| R |pi_n>,
//   d|pi_n>/dt  = -(i/hbar) H |pi_n> + sum_{m != n} |pi_m><pi_m|R|pi_n>/(p_n - p_m),
// where R is re-evaluated at every stage. Afterwards the eigenvector columns
// are re-orthonormalized (modified Gram-Schmidt) and the eigenvalues
// renormalized to unit sum. Throws DegenerateSpectrum when any eigenvalue gap
// falls below gap_floor.
ops::SpectralDecomposition step_eigensystem(
    const ops::SpectralDecomposition& sd,
    const std::function<Matrix(const ops::SpectralDecomposition&)>& irreversible,
    const Matrix& hamiltonian, double hbar, double dt,
    double gap_floor = 1e-8, double positivity_floor = -1e-6);

// --------------------------- full evolution ----------------------------------

struct EvolveOptions {
    bool back_reaction = false; // co-integrate H_e with dH_e/dt = -tr(H R)
    bool store_snapshots = false;
    std::vector<Observable> observables;
};

// Integrates rho0 for cfg.t_end, recording configured observables at t = 0,
// every record_stride-th step, and the final step. With the eigensystem
// method, steps that hit a degenerate spectrum fall back to a direct step and
// a fresh decomposition. Step errors are rethrown with the failure time.
Trajectory evolve(const Matrix& rho0, const meq::SystemSpec& spec,
                  const meq::BathState& bath, const RhsBuilder& rhs,
                  const SolverConfig& cfg, const EvolveOptions& opts = {});

// --------------------------- small-system RK4 --------------------------------

// RK4 step for plain vector states (Bloch vectors, moment ODEs).
template <class State, class F>
State rk4_step(const State& y, double dt, F&& deriv) {
    const State k1 = deriv(y);
    const State k2 = deriv(y + (0.5 * dt) * k1);
    const State k3 = deriv(y + (0.5 * dt) * k2);
    const State k4 = deriv(y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace tqme::solve
