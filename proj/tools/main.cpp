// Command-line driver: dissipative quantum dynamics experiments with CSV
// trajectory output. Exit codes: 0 success, 1 configuration error,
// 2 numerical failure.

#include "tqme/errors.hpp"
#include "tqme/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"tqme — simulator for dissipative quantum systems governed by the "
                 "nonlinear thermodynamic quantum master equation"};

    std::string config_path;
    std::string sweep_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    const auto add_value_flag = [&](const std::string& flag, const std::string& key,
                                    const std::string& help) {
        app.add_option_function<std::string>(
               flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
               help)
            ->expected(1);
    };

    app.add_option("--config", config_path, "key=value configuration file (flags override it)");
    app.add_option("--sweep", sweep_path,
                   "sweep file: one run per line of key=value overrides, run concurrently");

    add_value_flag("--experiment", "experiment",
                   "two_level_relax | oscillator_quench | mu_table | bloch_jacobian");
    add_value_flag("--equation", "equation",
                   "thermodynamic | linearized | caldeira_leggett | lindblad_bloch");
    add_value_flag("--method", "method", "direct | eigensystem");
    add_value_flag("--kT0", "kT0", "initial system temperature in units of hbar*omega");
    add_value_flag("--kTe", "kTe", "bath temperature in units of hbar*omega");
    add_value_flag("--omega", "omega", "oscillator/level-splitting angular frequency");
    add_value_flag("--mass", "mass", "oscillator mass");
    add_value_flag("--zeta-over-m-omega", "zeta_over_m_omega", "friction ratio zeta/(m omega)");
    add_value_flag("--gamma0", "gamma0", "two-level spontaneous emission rate");
    add_value_flag("--n-states", "n_states", "oscillator truncation index (states 0..N)");
    add_value_flag("--dt", "dt", "time step (0 = 1e-3 * 2pi/omega)");
    add_value_flag("--t-end", "t_end", "integration horizon (0 = experiment default)");
    add_value_flag("--record-stride", "record_stride", "record every n-th step");
    add_value_flag("--output-dir", "output_dir", "directory for trajectory.csv/run_meta/plot.gp");
    add_value_flag("--seed", "seed", "seed for random initial states");
    add_value_flag("--m0", "m0", "initial Bloch vector 'x,y,z' or 'random'");
    add_value_flag("--q3-boost", "q3_boost", "extra longitudinal coupling weight");
    add_value_flag("--heat-capacity", "heat_capacity", "bath heat capacity in k_B units");
    add_value_flag("--mu-points", "mu_points", "rows in the mu_table output");
    app.add_flag_function("--isotropic",
                          [&](std::int64_t) { overrides.emplace_back("isotropic", "1"); },
                          "isotropic two-level coupling (adds the sigma_3 channel)");
    app.add_flag_function("--back-reaction",
                          [&](std::int64_t) { overrides.emplace_back("back_reaction", "1"); },
                          "co-integrate the bath energy (requires --heat-capacity)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        std::fprintf(stderr, "configuration error: %s\n", err.what());
        return 1;
    }

    try {
        tqme::run::RunConfig cfg;
        if (!config_path.empty()) cfg = tqme::run::load_config_file(config_path, cfg);
        for (const auto& [key, value] : overrides) cfg.apply(key, value);

        if (!sweep_path.empty()) {
            const int failures = tqme::run::run_sweep(cfg, sweep_path);
            if (failures > 0) {
                std::fprintf(stderr, "numerical failure: %d sweep run(s) failed\n", failures);
                return 2;
            }
            return 0;
        }
        tqme::run::run(cfg);
        return 0;
    } catch (const tqme::ConfigError& err) {
        std::fprintf(stderr, "configuration error: %s\n", err.what());
        return 1;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "configuration error: %s\n", err.what());
        return 1;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "numerical failure: %s\n", err.what());
        return 2;
    }
}
