// master_equations.hpp — Right-hand sides of the three dynamics families
// (nonlinear thermodynamic, linearized, Caldeira-Leggett) and the heat-bath
// bracket coefficients they share. Units: hbar and k_B absorbed (kT is an
// energy), omega and mass carried explicitly.

#pragma once

#include "tqme/operator_core.hpp"

#include <limits>
#include <vector>

namespace tqme::meq {

using ops::Matrix;

enum class EquationKind { thermodynamic, linearized, caldeira_leggett };

// How the stored coupling number maps onto the bracket strength M(T_e):
//   bracket_strength : M given directly
//   friction         : M = zeta * kT / hbar^2        (particle in a potential)
//   emission_rate    : M = gamma0 * kT / (hbar*omega) (two-level radiative)
enum class CouplingConvention { bracket_strength, friction, emission_rate };

struct BathState {
    double kT = 1.0;       // k_B * T_e in energy units
    double coupling = 0.0; // raw value in the chosen convention
    CouplingConvention convention = CouplingConvention::bracket_strength;
    double convention_scale = 1.0; // hbar^2 (friction) or hbar*omega (emission)
    double heat_capacity = std::numeric_limits<double>::infinity(); // in k_B units
    double energy = 0.0;   // H_e; meaningful for finite heat capacity

    static BathState bracket(double strength, double kT);
    static BathState friction(double zeta, double kT, double hbar);
    static BathState emission(double gamma0, double kT, double hbar, double omega);

    // constant-heat-capacity bath: S_e = C ln(H_e/E_ref), so kT_e = H_e/C
    BathState with_heat_capacity(double capacity) const;
    BathState at_energy(double bath_energy) const;

    double bracket_strength() const; // M(T_e) at the current kT
    void validate() const;
};

// The two scalars multiplying the dissipative double commutators:
//   c_entropy = {H_e,S_e}^Q = M/kT,  c_energy = {H_e,H_e}^Q = M,
// so kT * c_entropy = c_energy exactly (detailed-balance condition).
struct BracketCoefficients {
    double c_entropy = 0.0;
    double c_energy = 0.0;
};
BracketCoefficients bracket_coefficients(const BathState& bath);

struct SystemSpec {
    Matrix hamiltonian;
    std::vector<Matrix> couplings;       // Hermitian Q_j
    std::vector<double> coupling_weights; // empty = all 1; multiplies M per coupling
    double hbar = 1.0;

    Eigen::Index dim() const { return hamiltonian.rows(); }
    double weight(std::size_t j) const {
        return coupling_weights.empty() ? 1.0 : coupling_weights.at(j);
    }
    void validate() const;
};

// Reversible and irreversible parts are kept separate: the eigensystem
// propagator consumes the irreversible operator R alone.
struct RhsParts {
    Matrix reversible;
    Matrix irreversible;
    Matrix total() const { return reversible + irreversible; }
};

// d rho/dt = (i/hbar)[rho,H] - sum_j w_j { c_S [Q_j, [Q_j,H]_rho] + c_H [Q_j,[Q_j,rho]] }.
// Stationary at rho ∝ exp(-H/kT) for any coupling strength.
RhsParts rhs_thermodynamic(const ops::SpectralDecomposition& sd,
                           const SystemSpec& spec, const BathState& bath);

// Same with [Q,H]_rho replaced by (1/2){[Q,H], rho}; needs no decomposition.
RhsParts rhs_linearized(const Matrix& rho, const SystemSpec& spec, const BathState& bath);

// d rho/dt = (i/hbar)[rho,H] - (i/hbar)(zeta/2m)[Q,{P,rho}] - (zeta kT/hbar^2)[Q,[Q,rho]]
// with zeta recovered from the bath bracket strength. Coincides with
// rhs_linearized when P = (m/i hbar)[Q,H].
RhsParts rhs_caldeira_leggett(const Matrix& rho, const SystemSpec& spec,
                              const BathState& bath, const Matrix& momentum, double mass);

} // namespace tqme::meq
