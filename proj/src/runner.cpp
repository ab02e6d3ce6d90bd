#include "tqme/runner.hpp"

#include "tqme/diagnostics.hpp"
#include "tqme/errors.hpp"
#include "tqme/oscillator.hpp"
#include "tqme/two_level.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tqme::run {

namespace fs = std::filesystem;

// --------------------------- enum names --------------------------------------

std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::two_level_relax: return "two_level_relax";
    case Experiment::oscillator_quench: return "oscillator_quench";
    case Experiment::mu_table: return "mu_table";
    case Experiment::bloch_jacobian: return "bloch_jacobian";
    }
    return "?";
}

std::string to_string(Equation e) {
    switch (e) {
    case Equation::thermodynamic: return "thermodynamic";
    case Equation::linearized: return "linearized";
    case Equation::caldeira_leggett: return "caldeira_leggett";
    case Equation::lindblad_bloch: return "lindblad_bloch";
    }
    return "?";
}

std::string to_string(solve::Method m) {
    return m == solve::Method::direct ? "direct" : "eigensystem";
}

Experiment experiment_from_string(const std::string& s) {
    if (s == "two_level_relax") return Experiment::two_level_relax;
    if (s == "oscillator_quench") return Experiment::oscillator_quench;
    if (s == "mu_table") return Experiment::mu_table;
    if (s == "bloch_jacobian") return Experiment::bloch_jacobian;
    throw ConfigError("unknown experiment '" + s + "'");
}

Equation equation_from_string(const std::string& s) {
    if (s == "thermodynamic") return Equation::thermodynamic;
    if (s == "linearized") return Equation::linearized;
    if (s == "caldeira_leggett") return Equation::caldeira_leggett;
    if (s == "lindblad_bloch") return Equation::lindblad_bloch;
    throw ConfigError("unknown equation '" + s + "'");
}

solve::Method method_from_string(const std::string& s) {
    if (s == "direct") return solve::Method::direct;
    if (s == "eigensystem") return solve::Method::eigensystem;
    throw ConfigError("unknown method '" + s + "' (expected direct or eigensystem)");
}

// --------------------------- config ------------------------------------------

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
    return out;
}

long parse_long(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long out = 0;
    try {
        out = std::stol(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("key '" + key + "': cannot parse boolean from '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "experiment") experiment = experiment_from_string(value);
    else if (key == "equation") equation = equation_from_string(value);
    else if (key == "method") method = method_from_string(value);
    else if (key == "kT0") kT0 = parse_double(key, value);
    else if (key == "kTe") kTe = parse_double(key, value);
    else if (key == "omega") omega = parse_double(key, value);
    else if (key == "mass") mass = parse_double(key, value);
    else if (key == "zeta_over_m_omega") zeta_over_m_omega = parse_double(key, value);
    else if (key == "gamma0") gamma0 = parse_double(key, value);
    else if (key == "n_states") n_states = static_cast<int>(parse_long(key, value));
    else if (key == "dt") dt = parse_double(key, value);
    else if (key == "t_end") t_end = parse_double(key, value);
    else if (key == "record_stride") record_stride = static_cast<int>(parse_long(key, value));
    else if (key == "output_dir") output_dir = value;
    else if (key == "seed") seed = static_cast<unsigned long>(parse_long(key, value));
    else if (key == "m0") m0 = value;
    else if (key == "isotropic") isotropic = parse_bool(key, value);
    else if (key == "q3_boost") q3_boost = parse_double(key, value);
    else if (key == "back_reaction") back_reaction = parse_bool(key, value);
    else if (key == "heat_capacity") heat_capacity = parse_double(key, value);
    else if (key == "mu_points") mu_points = static_cast<int>(parse_long(key, value));
    else throw ConfigError("unknown configuration key '" + key + "'");
}

void RunConfig::validate() const {
    if (equation == Equation::caldeira_leggett && experiment != Experiment::oscillator_quench)
        throw ConfigError("equation caldeira_leggett is only valid with oscillator_quench");
    if (equation == Equation::lindblad_bloch && experiment != Experiment::two_level_relax)
        throw ConfigError("equation lindblad_bloch is only valid with two_level_relax");
    if (!(omega > 0.0)) throw ConfigError("omega must be positive");
    if (!(mass > 0.0)) throw ConfigError("mass must be positive");
    if (!(kT0 > 0.0) || !(kTe > 0.0)) throw ConfigError("temperatures must be positive");
    if (zeta_over_m_omega < 0.0) throw ConfigError("zeta_over_m_omega must be nonnegative");
    if (gamma0 < 0.0) throw ConfigError("gamma0 must be nonnegative");
    if (n_states < 1) throw ConfigError("n_states must be at least 1");
    if (dt < 0.0) throw ConfigError("dt must be positive (or 0 for the default)");
    if (t_end < 0.0) throw ConfigError("t_end must be nonnegative (or 0 for the default)");
    if (record_stride < 1) throw ConfigError("record_stride must be at least 1");
    if (mu_points < 2) throw ConfigError("mu_points must be at least 2");
    if (back_reaction && !(heat_capacity > 0.0))
        throw ConfigError("back_reaction requires a positive heat_capacity");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

double RunConfig::resolved_dt() const {
    return dt > 0.0 ? dt : 1e-3 * 2.0 * std::numbers::pi / omega;
}

double RunConfig::resolved_t_end() const {
    if (t_end > 0.0) return t_end;
    if (experiment == Experiment::two_level_relax)
        return gamma0 > 0.0 ? 50.0 / gamma0 : 50.0 / omega;
    return 80.0 / omega;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        base.apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return base;
}

// --------------------------- output table ------------------------------------

namespace {

struct OutputTable {
    std::string first_column = "time";
    std::vector<double> first;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

OutputTable from_trajectory(const solve::Trajectory& traj) {
    OutputTable t;
    t.first = traj.times;
    t.names = traj.names;
    t.columns = traj.series;
    return t;
}

std::string csv_header(const OutputTable& t) {
    std::string h = t.first_column;
    for (const auto& n : t.names) h += "," + n;
    return h;
}

void write_csv(const fs::path& path, const OutputTable& t) {
    std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << csv_header(t) << "\n";
    for (std::size_t i = 0; i < t.first.size(); ++i) {
        out << fmt17(t.first[i]);
        for (const auto& col : t.columns) out << "," << fmt17(col[i]);
        out << "\n";
    }
}

void write_meta(const fs::path& path, const RunConfig& cfg, const OutputTable& table,
                const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "code_version=" << kCodeVersion << "\n";
    out << "schema_version=" << kSchemaVersion << "\n";
    out << "csv_columns=" << csv_header(table) << "\n";
    out << "experiment=" << to_string(cfg.experiment) << "\n";
    out << "equation=" << to_string(cfg.equation) << "\n";
    out << "method=" << to_string(cfg.method) << "\n";
    out << "kT0=" << fmt17(cfg.kT0) << "\n";
    out << "kTe=" << fmt17(cfg.kTe) << "\n";
    out << "omega=" << fmt17(cfg.omega) << "\n";
    out << "mass=" << fmt17(cfg.mass) << "\n";
    out << "zeta_over_m_omega=" << fmt17(cfg.zeta_over_m_omega) << "\n";
    out << "gamma0=" << fmt17(cfg.gamma0) << "\n";
    out << "n_states=" << cfg.n_states << "\n";
    out << "dt=" << fmt17(cfg.resolved_dt()) << "\n";
    out << "t_end=" << fmt17(cfg.resolved_t_end()) << "\n";
    out << "record_stride=" << cfg.record_stride << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "m0=" << cfg.m0 << "\n";
    out << "isotropic=" << (cfg.isotropic ? 1 : 0) << "\n";
    out << "q3_boost=" << fmt17(cfg.q3_boost) << "\n";
    out << "back_reaction=" << (cfg.back_reaction ? 1 : 0) << "\n";
    out << "heat_capacity=" << fmt17(cfg.heat_capacity) << "\n";
    out << "mu_points=" << cfg.mu_points << "\n";
    for (const auto& [k, v] : extra) out << k << "=" << v << "\n";
}

void write_plot(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# gnuplot script; run from this directory: gnuplot plot.gp\n";
    out << "set datafile separator ','\n";
    out << body;
}

int column_index(const OutputTable& t, const std::string& name) {
    for (std::size_t k = 0; k < t.names.size(); ++k)
        if (t.names[k] == name) return static_cast<int>(k) + 2; // 1-based, after first column
    throw std::logic_error("plot: missing column " + name);
}

// --------------------------- experiments -------------------------------------

twolevel::Vec3 initial_bloch(const RunConfig& cfg) {
    if (cfg.m0 == "random") {
        std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed));
        std::normal_distribution<double> gauss(0.0, 1.0);
        twolevel::Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
        if (dir.norm() == 0.0) dir = twolevel::Vec3(1, 0, 0);
        dir.normalize();
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        return dir * 0.95 * std::cbrt(uni(rng));
    }
    std::istringstream in(cfg.m0);
    twolevel::Vec3 m;
    char comma = 0;
    if (!(in >> m(0) >> comma >> m(1) >> comma >> m(2)))
        throw ConfigError("m0: expected 'x,y,z' or 'random', got '" + cfg.m0 + "'");
    if (m.norm() > 1.0)
        throw ConfigError("m0: initial Bloch vector must lie inside the unit sphere");
    return m;
}

twolevel::TwoLevelParams two_level_params(const RunConfig& cfg) {
    twolevel::TwoLevelParams p;
    p.omega = cfg.omega;
    p.gamma0 = cfg.gamma0;
    p.kT = cfg.kTe * cfg.omega; // ratio of hbar*omega -> energy units, hbar = 1
    p.isotropic = cfg.isotropic;
    p.q3_boost = cfg.q3_boost;
    return p;
}

solve::SolverConfig solver_config(const RunConfig& cfg) {
    solve::SolverConfig s;
    s.dt = cfg.resolved_dt();
    s.t_end = cfg.resolved_t_end();
    s.method = cfg.method;
    s.record_stride = cfg.record_stride;
    return s;
}

solve::Trajectory run_two_level_bloch_ode(const RunConfig& cfg) {
    const twolevel::TwoLevelParams p = two_level_params(cfg);
    const solve::SolverConfig sc = solver_config(cfg);
    const long n_steps = std::max<long>(1, std::llround(sc.t_end / sc.dt));

    solve::Trajectory traj;
    traj.names = {"m1", "m2", "m3", "m_norm", "energy"};
    traj.series.assign(traj.names.size(), {});
    twolevel::Vec3 m = initial_bloch(cfg);
    const auto record = [&](double t) {
        traj.times.push_back(t);
        traj.series[0].push_back(m(0));
        traj.series[1].push_back(m(1));
        traj.series[2].push_back(m(2));
        traj.series[3].push_back(m.norm());
        traj.series[4].push_back(0.5 * p.omega * m(2)); // tr(H rho), hbar = 1
    };
    record(0.0);
    for (long k = 1; k <= n_steps; ++k) {
        m = solve::rk4_step(m, sc.dt, [&](const twolevel::Vec3& y) {
            return twolevel::bloch_rhs_lindblad(y, p);
        });
        if (k % sc.record_stride == 0 || k == n_steps) record(k * sc.dt);
    }
    return traj;
}

solve::Trajectory run_two_level_master_equation(const RunConfig& cfg) {
    const twolevel::TwoLevelParams p = two_level_params(cfg);
    const meq::SystemSpec spec = twolevel::make_spec(p);
    meq::BathState bath = twolevel::make_bath(p);
    if (cfg.back_reaction) bath = bath.with_heat_capacity(cfg.heat_capacity);

    solve::EvolveOptions opts;
    opts.back_reaction = cfg.back_reaction;
    for (int j = 0; j < 3; ++j)
        opts.observables.push_back({std::string("m") + std::to_string(j + 1),
                                    [j](const solve::EvolveSample& s) {
                                        return twolevel::bloch_from_density(s.rho)(j);
                                    }});
    opts.observables.push_back({"m_norm", [](const solve::EvolveSample& s) {
                                    return twolevel::bloch_from_density(s.rho).norm();
                                }});
    opts.observables.push_back({"energy", [h = spec.hamiltonian](const solve::EvolveSample& s) {
                                    return ops::expectation(h, s.rho);
                                }});
    opts.observables.push_back({"p_0", [](const solve::EvolveSample& s) {
                                    return s.sd.eigenvalues(0);
                                }});
    opts.observables.push_back({"p_1", [](const solve::EvolveSample& s) {
                                    return s.sd.eigenvalues(1);
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
    if (cfg.back_reaction)
        opts.observables.push_back({"bath_energy", [](const solve::EvolveSample& s) {
                                        return s.bath.energy;
                                    }});

    const meq::EquationKind kind = cfg.equation == Equation::thermodynamic
                                       ? meq::EquationKind::thermodynamic
                                       : meq::EquationKind::linearized;
    return solve::evolve(twolevel::density_from_bloch(initial_bloch(cfg)), spec, bath,
                         solve::make_rhs_builder(kind, spec), solver_config(cfg), opts);
}

std::string two_level_plot(const OutputTable& t) {
    std::ostringstream out;
    out << "set xlabel 'time'\n";
    out << "set ylabel 'Bloch vector'\n";
    out << "plot 'trajectory.csv' using 1:" << column_index(t, "m1") << " with lines title 'm1', \\\n";
    out << "     'trajectory.csv' using 1:" << column_index(t, "m2") << " with lines title 'm2', \\\n";
    out << "     'trajectory.csv' using 1:" << column_index(t, "m3") << " with lines title 'm3', \\\n";
    out << "     'trajectory.csv' using 1:" << column_index(t, "m_norm") << " with lines title '|m|'\n";
    return out.str();
}

osc::OscillatorParams oscillator_params(const RunConfig& cfg) {
    osc::OscillatorParams p;
    p.n_max = cfg.n_states;
    p.mass = cfg.mass;
    p.omega = cfg.omega;
    p.zeta = cfg.zeta_over_m_omega * cfg.mass * cfg.omega;
    p.kT0 = cfg.kT0 * cfg.omega;
    p.kTe = cfg.kTe * cfg.omega;
    return p;
}

meq::EquationKind oscillator_equation(Equation e) {
    switch (e) {
    case Equation::thermodynamic: return meq::EquationKind::thermodynamic;
    case Equation::linearized: return meq::EquationKind::linearized;
    case Equation::caldeira_leggett: return meq::EquationKind::caldeira_leggett;
    default: break;
    }
    throw ConfigError("equation not applicable to the oscillator");
}

std::string oscillator_plot(const OutputTable& t, const osc::OscillatorParams& p) {
    std::ostringstream out;
    out << "set multiplot layout 2,1\n";
    out << "set xlabel 'time'\n";
    out << "set ylabel '<P^2>'\n";
    out << "cl_asymptote = " << fmt17(p.mass * p.kTe) << "\n";
    out << "exact_asymptote = " << fmt17(osc::equilibrium_p2(p)) << "\n";
    out << "plot 'trajectory.csv' using 1:" << column_index(t, "p2")
        << " with lines title '<P^2>', \\\n";
    out << "     cl_asymptote with lines dashtype 2 title 'm kT_e', \\\n";
    out << "     exact_asymptote with lines dashtype 3 title 'equilibrium'\n";
    out << "set ylabel 'overlap'\n";
    out << "plot";
    const char* sep = " ";
    for (int j = 0; j < 3; ++j) {
        const std::string name = "overlap_" + std::to_string(j);
        if (std::find(t.names.begin(), t.names.end(), name) == t.names.end()) continue;
        out << sep << "'trajectory.csv' using 1:" << column_index(t, name)
            << " with lines title 'j=" << j << "'";
        sep = ", \\\n     ";
    }
    out << "\nunset multiplot\n";
    return out.str();
}

OutputTable run_mu_table(const RunConfig& cfg) {
    OutputTable t;
    t.first_column = "m";
    t.names = {"mu"};
    t.columns.assign(1, {});
    for (int i = 0; i < cfg.mu_points; ++i) {
        const double m = 0.999 * static_cast<double>(i) / (cfg.mu_points - 1);
        t.first.push_back(m);
        t.columns[0].push_back(twolevel::mu(m));
    }
    return t;
}

OutputTable run_bloch_jacobian(const RunConfig& cfg) {
    const twolevel::TwoLevelParams p = two_level_params(cfg);
    const twolevel::Mat3 j = twolevel::bloch_linearized_matrix(p);
    const twolevel::Vec3 m_eq = twolevel::bloch_equilibrium(p);

    Eigen::EigenSolver<twolevel::Mat3> es(j);
    std::vector<std::complex<double>> eigs(3);
    for (int k = 0; k < 3; ++k) eigs[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    OutputTable t;
    t.first_column = "kT";
    t.first = {p.kT};
    t.names = {"m_eq_z"};
    t.columns = {{m_eq(2)}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            t.names.push_back("J" + std::to_string(r) + std::to_string(c));
            t.columns.push_back({j(r, c)});
        }
    for (int k = 0; k < 3; ++k) {
        t.names.push_back("eig" + std::to_string(k) + "_re");
        t.columns.push_back({eigs[static_cast<std::size_t>(k)].real()});
        t.names.push_back("eig" + std::to_string(k) + "_im");
        t.columns.push_back({eigs[static_cast<std::size_t>(k)].imag()});
    }
    return t;
}

std::string mu_plot(const OutputTable&) {
    return "set xlabel 'm'\nset ylabel 'mu(m)'\n"
           "plot 'trajectory.csv' using 1:2 with lines title 'mu'\n";
}

} // namespace

// --------------------------- run dispatch ------------------------------------

void run(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);

    OutputTable table;
    std::string plot_body;
    std::vector<std::pair<std::string, std::string>> extra_meta;

    switch (cfg.experiment) {
    case Experiment::oscillator_quench: {
        const osc::OscillatorParams p = oscillator_params(cfg);
        const double capacity = cfg.heat_capacity > 0.0 ? cfg.heat_capacity : 0.0;
        table = from_trajectory(osc::quench_experiment(p, oscillator_equation(cfg.equation),
                                                       solver_config(cfg), cfg.back_reaction,
                                                       capacity));
        plot_body = oscillator_plot(table, p);
        extra_meta.emplace_back("zeta", fmt17(p.zeta));
        extra_meta.emplace_back("equilibrium_p2", fmt17(osc::equilibrium_p2(p)));
        extra_meta.emplace_back("cl_asymptote", fmt17(p.mass * p.kTe));
        break;
    }
    case Experiment::two_level_relax: {
        table = from_trajectory(cfg.equation == Equation::lindblad_bloch
                                    ? run_two_level_bloch_ode(cfg)
                                    : run_two_level_master_equation(cfg));
        plot_body = two_level_plot(table);
        const twolevel::TwoLevelParams p = two_level_params(cfg);
        extra_meta.emplace_back("m_eq_z", fmt17(twolevel::bloch_equilibrium(p)(2)));
        break;
    }
    case Experiment::mu_table:
        table = run_mu_table(cfg);
        plot_body = mu_plot(table);
        break;
    case Experiment::bloch_jacobian:
        table = run_bloch_jacobian(cfg);
        plot_body = "# single-row output; nothing to plot\n";
        break;
    }

    const fs::path dir(cfg.output_dir);
    write_csv(dir / "trajectory.csv", table);
    extra_meta.emplace_back("rows", std::to_string(table.first.size()));
    write_meta(dir / "run_meta", cfg, table, extra_meta);
    write_plot(dir / "plot.gp", plot_body);
}

int run_sweep(const RunConfig& base, const std::string& sweep_file) {
    std::ifstream in(sweep_file);
    if (!in) throw ConfigError("cannot open sweep file '" + sweep_file + "'");

    std::vector<RunConfig> configs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        RunConfig cfg = base;
        std::istringstream tokens(stripped);
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos)
                throw ConfigError(sweep_file + ":" + std::to_string(line_no)
                                  + ": expected key=value tokens");
            cfg.apply(token.substr(0, eq), token.substr(eq + 1));
        }
        char tag[16];
        std::snprintf(tag, sizeof(tag), "sweep_%03zu", configs.size());
        cfg.output_dir = (fs::path(base.output_dir) / tag).string();
        cfg.validate(); // reject broken lines before launching anything
        configs.push_back(std::move(cfg));
    }

    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(configs.size())));
    std::vector<std::future<bool>> results;
    results.reserve(configs.size());
    std::size_t next = 0;
    int failures = 0;
    while (next < configs.size() || !results.empty()) {
        while (next < configs.size() && results.size() < workers) {
            const RunConfig cfg = configs[next++];
            results.push_back(std::async(std::launch::async, [cfg]() {
                try {
                    run(cfg);
                    return true;
                } catch (const std::exception& err) {
                    std::fprintf(stderr, "sweep run %s failed: %s\n", cfg.output_dir.c_str(),
                                 err.what());
                    return false;
                }
            }));
        }
        if (!results.front().get()) ++failures;
        results.erase(results.begin());
    }
    return failures;
}

} // namespace tqme::run
