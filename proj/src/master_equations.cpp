#include "tqme/master_equations.hpp"

#include <cmath>
#include <stdexcept>

namespace tqme::meq {

using ops::commutator;
using ops::anticommutator;

// --------------------------- bath ------------------------------------------

BathState BathState::bracket(double strength, double kT) {
    BathState b;
    b.kT = kT;
    b.coupling = strength;
    b.convention = CouplingConvention::bracket_strength;
    b.validate();
    return b;
}

BathState BathState::friction(double zeta, double kT, double hbar) {
    BathState b;
    b.kT = kT;
    b.coupling = zeta;
    b.convention = CouplingConvention::friction;
    b.convention_scale = hbar * hbar;
    b.validate();
    return b;
}

BathState BathState::emission(double gamma0, double kT, double hbar, double omega) {
    BathState b;
    b.kT = kT;
    b.coupling = gamma0;
    b.convention = CouplingConvention::emission_rate;
    b.convention_scale = hbar * omega;
    b.validate();
    return b;
}

BathState BathState::with_heat_capacity(double capacity) const {
    if (!(capacity > 0.0)) throw std::invalid_argument("BathState: heat capacity must be positive");
    BathState b = *this;
    b.heat_capacity = capacity;
    b.energy = capacity * b.kT;
    return b;
}

BathState BathState::at_energy(double bath_energy) const {
    BathState b = *this;
    b.energy = bath_energy;
    if (std::isfinite(b.heat_capacity)) b.kT = bath_energy / b.heat_capacity;
    return b;
}

double BathState::bracket_strength() const {
    if (convention == CouplingConvention::bracket_strength) return coupling;
    return coupling * kT / convention_scale;
}

void BathState::validate() const {
    if (!(kT > 0.0)) throw std::invalid_argument("BathState: kT must be positive");
    if (coupling < 0.0) throw std::invalid_argument("BathState: coupling must be nonnegative");
    if (convention != CouplingConvention::bracket_strength && !(convention_scale > 0.0))
        throw std::invalid_argument("BathState: convention scale must be positive");
}

BracketCoefficients bracket_coefficients(const BathState& bath) {
    bath.validate();
    const double m = bath.bracket_strength();
    return {m / bath.kT, m};
}

// --------------------------- system spec ------------------------------------

void SystemSpec::validate() const {
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0)
        throw std::invalid_argument("SystemSpec: Hamiltonian must be square and non-empty");
    if (!ops::is_hermitian(hamiltonian, 1e-12))
        throw std::invalid_argument("SystemSpec: Hamiltonian must be Hermitian");
    for (const auto& q : couplings) {
        if (q.rows() != hamiltonian.rows() || q.cols() != hamiltonian.cols())
            throw std::invalid_argument("SystemSpec: coupling dimension mismatch");
        if (!ops::is_hermitian(q, 1e-12))
            throw std::invalid_argument("SystemSpec: coupling operator must be Hermitian");
    }
    if (!coupling_weights.empty() && coupling_weights.size() != couplings.size())
        throw std::invalid_argument("SystemSpec: one weight per coupling required");
    if (!(hbar > 0.0)) throw std::invalid_argument("SystemSpec: hbar must be positive");
}

// --------------------------- right-hand sides --------------------------------

namespace {

Matrix reversible_part(const Matrix& rho, const SystemSpec& spec) {
    return (ops::Complex(0.0, 1.0) / spec.hbar) * commutator(rho, spec.hamiltonian);
}

} // namespace

RhsParts rhs_thermodynamic(const ops::SpectralDecomposition& sd,
                           const SystemSpec& spec, const BathState& bath) {
    if (sd.dim() != spec.dim())
        throw std::invalid_argument("rhs_thermodynamic: dimension mismatch");
    const auto [c_s, c_h] = bracket_coefficients(bath);
    const Matrix rho = sd.reconstruct();

    RhsParts out;
    out.reversible = reversible_part(rho, spec);
    out.irreversible = Matrix::Zero(spec.dim(), spec.dim());
    for (std::size_t j = 0; j < spec.couplings.size(); ++j) {
        const Matrix& q = spec.couplings[j];
        const Matrix qh = commutator(q, spec.hamiltonian);
        const Matrix qh_cond = ops::conditional_operator(qh, sd);
        out.irreversible -= spec.weight(j)
            * (c_s * commutator(q, qh_cond) + c_h * commutator(q, commutator(q, rho)));
    }
    return out;
}

RhsParts rhs_linearized(const Matrix& rho, const SystemSpec& spec, const BathState& bath) {
    if (rho.rows() != spec.dim() || rho.cols() != spec.dim())
        throw std::invalid_argument("rhs_linearized: dimension mismatch");
    const auto [c_s, c_h] = bracket_coefficients(bath);

    RhsParts out;
    out.reversible = reversible_part(rho, spec);
    out.irreversible = Matrix::Zero(spec.dim(), spec.dim());
    for (std::size_t j = 0; j < spec.couplings.size(); ++j) {
        const Matrix& q = spec.couplings[j];
        const Matrix qh = commutator(q, spec.hamiltonian);
        out.irreversible -= spec.weight(j)
            * (0.5 * c_s * commutator(q, anticommutator(qh, rho))
               + c_h * commutator(q, commutator(q, rho)));
    }
    return out;
}

RhsParts rhs_caldeira_leggett(const Matrix& rho, const SystemSpec& spec,
                              const BathState& bath, const Matrix& momentum, double mass) {
    if (rho.rows() != spec.dim() || rho.cols() != spec.dim())
        throw std::invalid_argument("rhs_caldeira_leggett: dimension mismatch");
    if (spec.couplings.size() != 1)
        throw std::invalid_argument("rhs_caldeira_leggett: exactly one position coupling expected");
    if (!(mass > 0.0)) throw std::invalid_argument("rhs_caldeira_leggett: mass must be positive");
    ops::check_same_dim(rho, momentum, "rhs_caldeira_leggett");

    const double hbar = spec.hbar;
    const double zeta = bath.bracket_strength() * hbar * hbar / bath.kT;
    const Matrix& q = spec.couplings[0];

    RhsParts out;
    out.reversible = reversible_part(rho, spec);
    out.irreversible =
        -(ops::Complex(0.0, 1.0) / hbar) * (zeta / (2.0 * mass))
            * commutator(q, anticommutator(momentum, rho))
        - (zeta * bath.kT / (hbar * hbar)) * commutator(q, commutator(q, rho));
    return out;
}

} // namespace tqme::meq
