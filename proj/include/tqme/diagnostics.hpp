// diagnostics.hpp — Thermodynamic bookkeeping: entropy production by two
// independent routes, the free-energy operator, the energy flow into the
// environment, and eigenstate overlaps.

#pragma once

#include "tqme/master_equations.hpp"

#include <vector>

namespace tqme::diag {

using ops::Matrix;

// F = H + kT ln rho (floored logarithm)
Matrix free_energy_operator(const Matrix& hamiltonian, const ops::SpectralDecomposition& sd,
                            double kT, double floor = ops::kEigenvalueFloor);

struct EntropyReport {
    double system_rate;         // -k_B tr(ln rho d rho/dt)
    double bath_rate;           // dS_e/dt = (1/T_e) dH_e/dt
    double total_rate;          // sum of the two
    double canonical_form_rate; // (M/kT^2) <<i[Q,F]; i[Q,F]>> summed over couplings
};

// The total rate and the canonical-correlation form are independent code
// paths; they agree for heat-bath dynamics and the total is nonnegative.
EntropyReport entropy_rate(const ops::SpectralDecomposition& sd, const meq::SystemSpec& spec,
                           const meq::BathState& bath, const Matrix& irreversible);

// dH_e/dt = sum_j w_j { c_S <<i[Q_j,H]; i[Q_j,H]>> + c_H <[Q_j,[Q_j,H]]> };
// equals -tr(H R), balancing the system's energy loss.
double environment_energy_rate(const ops::SpectralDecomposition& sd,
                               const meq::SystemSpec& spec, const meq::BathState& bath);

// |<E_j|pi_j>| pairing the j-th lowest-energy eigenstate of H with the j-th
// highest-probability eigenvector of rho, for j = 0 .. count-1
std::vector<double> eigenstate_overlaps(const ops::SpectralDecomposition& sd,
                                        const Matrix& hamiltonian, int count);

// the same overlap list for every stored snapshot
std::vector<std::vector<double>> overlap_series(const std::vector<Matrix>& snapshots,
                                                const Matrix& hamiltonian, int count);

} // namespace tqme::diag
