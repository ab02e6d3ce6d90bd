#include "tqme/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace tqme::diag {

Matrix free_energy_operator(const Matrix& hamiltonian, const ops::SpectralDecomposition& sd,
                            double kT, double floor) {
    if (!(kT > 0.0)) throw std::invalid_argument("free_energy_operator: kT must be positive");
    if (hamiltonian.rows() != sd.dim())
        throw std::invalid_argument("free_energy_operator: dimension mismatch");
    return hamiltonian + kT * ops::operator_log(sd, floor);
}

EntropyReport entropy_rate(const ops::SpectralDecomposition& sd, const meq::SystemSpec& spec,
                           const meq::BathState& bath, const Matrix& irreversible) {
    if (irreversible.rows() != sd.dim())
        throw std::invalid_argument("entropy_rate: dimension mismatch");
    const auto [c_s, c_h] = meq::bracket_coefficients(bath);

    EntropyReport report{};
    // the reversible part commutes with ln rho and drops from the trace, so
    // d rho/dt can be replaced by R
    const Matrix log_rho = ops::operator_log(sd);
    report.system_rate = -(log_rho * irreversible).trace().real();
    report.bath_rate = -(spec.hamiltonian * irreversible).trace().real() / bath.kT;
    report.total_rate = report.system_rate + report.bath_rate;

    const Matrix free_energy = free_energy_operator(spec.hamiltonian, sd, bath.kT);
    const ops::Complex i_unit(0.0, 1.0);
    double canonical = 0.0;
    for (std::size_t j = 0; j < spec.couplings.size(); ++j) {
        const Matrix flow = i_unit * ops::commutator(spec.couplings[j], free_energy);
        canonical += spec.weight(j) * ops::canonical_correlation(flow, flow, sd);
    }
    report.canonical_form_rate = canonical * c_h / (bath.kT * bath.kT);
    return report;
}

double environment_energy_rate(const ops::SpectralDecomposition& sd,
                               const meq::SystemSpec& spec, const meq::BathState& bath) {
    const auto [c_s, c_h] = meq::bracket_coefficients(bath);
    const Matrix rho = sd.reconstruct();
    const ops::Complex i_unit(0.0, 1.0);
    double rate = 0.0;
    for (std::size_t j = 0; j < spec.couplings.size(); ++j) {
        const Matrix& q = spec.couplings[j];
        const Matrix qh = ops::commutator(q, spec.hamiltonian);
        // <<[Q,H];[Q,H]>> of the anti-Hermitian commutator, sign restored
        const double correlation = ops::canonical_correlation(i_unit * qh, i_unit * qh, sd);
        const double double_comm = (ops::commutator(q, qh) * rho).trace().real();
        rate += spec.weight(j) * (c_s * correlation + c_h * double_comm);
    }
    return rate;
}

std::vector<double> eigenstate_overlaps(const ops::SpectralDecomposition& sd,
                                        const Matrix& hamiltonian, int count) {
    if (hamiltonian.rows() != sd.dim())
        throw std::invalid_argument("eigenstate_overlaps: dimension mismatch");
    if (count < 0 || count > sd.dim())
        throw std::out_of_range("eigenstate_overlaps: count beyond stored rank");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenstate_overlaps: eigensolver failed");
    // es eigenvalues ascending: column j is the j-th lowest energy state;
    // sd eigenvalues descending: column j is the j-th most probable state
    std::vector<double> overlaps(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j)
        overlaps[static_cast<std::size_t>(j)] =
            std::abs(es.eigenvectors().col(j).dot(sd.eigenvectors.col(j)));
    return overlaps;
}

std::vector<std::vector<double>> overlap_series(const std::vector<Matrix>& snapshots,
                                                const Matrix& hamiltonian, int count) {
    std::vector<std::vector<double>> series;
    series.reserve(snapshots.size());
    for (const Matrix& rho : snapshots)
        series.push_back(eigenstate_overlaps(ops::spectral_decompose(rho), hamiltonian, count));
    return series;
}

} // namespace tqme::diag
