// runner.hpp — Run configuration, experiment dispatch, and file output
// (trajectory.csv, run_meta, plot.gp) behind the command-line tool.

#pragma once

#include "tqme/solvers.hpp"

#include <string>
#include <vector>

namespace tqme::run {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Experiment { two_level_relax, oscillator_quench, mu_table, bloch_jacobian };
enum class Equation { thermodynamic, linearized, caldeira_leggett, lindblad_bloch };

std::string to_string(Experiment e);
std::string to_string(Equation e);
std::string to_string(solve::Method m);
Experiment experiment_from_string(const std::string& s);
Equation equation_from_string(const std::string& s);
solve::Method method_from_string(const std::string& s);

// Flat key=value configuration; flags use the same keys. Temperatures are
// given in units of hbar*omega, friction as zeta/(m omega).
struct RunConfig {
    Experiment experiment = Experiment::oscillator_quench;
    Equation equation = Equation::thermodynamic;
    solve::Method method = solve::Method::direct;

    double kT0 = 1.5;
    double kTe = 0.5;
    double omega = 1.0;
    double mass = 1.0;
    double zeta_over_m_omega = 0.1;
    double gamma0 = 0.1;
    int n_states = 9;

    double dt = 0.0;    // 0: 1e-3 * 2pi/omega
    double t_end = 0.0; // 0: experiment default
    int record_stride = 10;

    std::string output_dir = "out";
    unsigned long seed = 12345;
    std::string m0 = "0.8,0,0.2"; // initial Bloch vector, or "random"
    bool isotropic = false;
    double q3_boost = 0.0;
    bool back_reaction = false;
    double heat_capacity = 0.0; // <= 0: infinite
    int mu_points = 1000;

    void apply(const std::string& key, const std::string& value);
    void validate() const;
    double resolved_dt() const;
    double resolved_t_end() const;
};

// defaults < config file < overrides (appliers win in order)
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Executes one experiment and writes trajectory.csv, run_meta, and plot.gp
// into cfg.output_dir. Throws ConfigError for invalid configurations and the
// numerical error types for failing runs.
void run(const RunConfig& cfg);

// One run per non-empty line of the sweep file (key=value tokens overriding
// the base config), executed concurrently, each in output_dir/sweep_NNN.
// Returns the number of failed runs.
int run_sweep(const RunConfig& base, const std::string& sweep_file);

} // namespace tqme::run
