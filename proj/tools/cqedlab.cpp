// cqedlab: grid scans and consistency checks for the dissipative atom-cavity-reservoir model.
//
// Exit codes: 0 success, 1 invalid configuration or I/O failure, 2 trajectory check failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cqed/scan.hpp"
#include "cqed/scan_config.hpp"
#include "cqed/scan_io.hpp"

namespace {

constexpr int kExitSpecError = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOptions {
    std::string config_path;
    cqed::ScanOverrides overrides;
    unsigned jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON or TOML config file");
    cmd->add_option("--lambda-c", opts.overrides.lambda_c, "cavity decay rate (fixed value)");
    cmd->add_option("--a-re", opts.overrides.a_re, "real part of amplitude a");
    cmd->add_option("--a-im", opts.overrides.a_im, "imaginary part of amplitude a");
    cmd->add_option("--t-max", opts.overrides.t_max, "upper end of the t axis");
    cmd->add_option("--step", opts.overrides.step, "step of both axes");
    cmd->add_option("--out", opts.overrides.out, "output file");
    cmd->add_option("--format", opts.overrides.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--partition", opts.overrides.partition, "two-qubit partition, e.g. cavity-cavity");
    cmd->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
}

nlohmann::json read_config(const std::string& path) {
    return path.empty() ? nlohmann::json::object() : cqed::load_config_document(path);
}

void print_summary(const cqed::WitnessGrid& grid) {
    const cqed::GridSummary s = cqed::summarize(grid);
    std::cout << "wrote " << grid.spec.output << " (" << s.cells << " cells, " << cqed::to_string(grid.spec.quantity)
              << ", " << cqed::to_string(grid.spec.partition) << ")\n";
    for (cqed::CellFlag flag : {cqed::CellFlag::Negative, cqed::CellFlag::NonNegative, cqed::CellFlag::Violating,
                                cqed::CellFlag::Undefined}) {
        std::printf("  %-13s %8zu  (%.4f)\n", std::string(cqed::to_string(flag)).c_str(), s.count(flag),
                    s.fraction(flag));
    }
    if (s.has_values) {
        std::printf("  min %.10g at (%g, %g)\n  max %.10g at (%g, %g)\n", s.min_value, s.min_at.first,
                    s.min_at.second, s.max_value, s.max_at.first, s.max_at.second);
    }
}

int run_grid(const std::string& subcommand, const CommonOptions& opts) {
    const cqed::ScanSpec spec = cqed::build_scan_spec(subcommand, read_config(opts.config_path), opts.overrides);
    const cqed::WitnessGrid grid = cqed::run_scan(spec, opts.jobs);
    cqed::write_grid_file(grid);
    print_summary(grid);
    return 0;
}

int run_amplitudes(const std::string& config_path, std::optional<double> lambda_c, std::optional<double> t_max,
                   std::optional<double> step, std::optional<double> ode_tol, const std::string& out_path) {
    cqed::AmplitudeTableSpec spec = cqed::build_amplitude_spec(read_config(config_path), lambda_c, t_max, step);
    if (ode_tol) spec.ode_tol = ode_tol;
    if (out_path.empty() || out_path == "-") {
        cqed::write_amplitude_table(spec, std::cout);
        return 0;
    }
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    cqed::write_amplitude_table(spec, file);
    std::cout << "wrote " << out_path << '\n';
    return 0;
}

int run_trajectory(const std::string& config_path, std::optional<double> lambda_c,
                   std::optional<double> reference_lambda_c) {
    cqed::TrajectoryCheckSetup setup = cqed::build_trajectory_setup(read_config(config_path), lambda_c);
    if (reference_lambda_c) setup.reference.cavity_decay = *reference_lambda_c;
    cqed::validate(setup.reference);

    cqed::TrajectoryReport report;
    try {
        report = cqed::run_trajectory_check(setup.config, setup.reference);
    } catch (const cqed::ConvergenceError& e) {
        std::cerr << "trajectory-check: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    std::printf("%8s %-10s %14s %14s %12s %9s\n", "t", "quantity", "analytic", "estimate", "se", "z");
    for (const cqed::TrajectoryCheckRow& row : report.rows) {
        std::printf("%8.4f %-10s %14.8f %14.8f %12.3e %9.3f\n", row.t, row.quantity.c_str(), row.analytic,
                    row.estimate, row.se, row.z);
    }
    std::printf("3-sigma misses %zu (allowed %zu), 5-sigma misses %zu: %s\n", report.misses_3sigma,
                report.allowed_3sigma, report.misses_5sigma, report.passed ? "PASS" : "FAIL");
    return report.passed ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid scans of fidelities, non-Markovianity witnesses, Bell functions and correlations"};
    app.require_subcommand(1);

    std::string amp_config;
    std::optional<double> amp_lambda, amp_tmax, amp_step, amp_tol;
    std::string amp_out;
    auto* amplitudes = app.add_subcommand("amplitudes", "closed-form excitation amplitudes and probabilities");
    amplitudes->add_option("--config", amp_config, "JSON or TOML config file");
    amplitudes->add_option("--lambda-c", amp_lambda, "cavity decay rate");
    amplitudes->add_option("--t-max", amp_tmax, "last time");
    amplitudes->add_option("--step", amp_step, "time step");
    amplitudes->add_option("--ode-tol", amp_tol, "also integrate the ODE oracle at this tolerance");
    amplitudes->add_option("--out", amp_out, "output CSV (default stdout)");

    CommonOptions fidelity_opts, nm_opts, chsh_opts, corr_opts;
    auto* fidelity = app.add_subcommand("fidelity-surface", "F[rho(0), rho(t)] over (t, lambda_c)");
    add_common(fidelity, fidelity_opts);

    auto* nm = app.add_subcommand("nm-map", "difference witness over (t, tau)");
    add_common(nm, nm_opts);
    nm->add_option("--witness", nm_opts.overrides.quantity, "fidelity, trace-distance or relative-entropy");
    nm->add_option("--tau", nm_opts.overrides.tau, "fixed lag when tau is not an axis");
    nm->add_option("--epsilon", nm_opts.overrides.epsilon, "relative-entropy mixing regularizer");

    auto* chsh_map = app.add_subcommand("chsh-map", "CHSH-Bell function over (t, lambda_c)");
    add_common(chsh_map, chsh_opts);

    auto* corr = app.add_subcommand("corr-map", "classical/quantum correlations over (t, lambda_c)");
    add_common(corr, corr_opts);
    corr->add_option("--measure", corr_opts.overrides.quantity, "classical, discord or mutual-information");

    std::string traj_config;
    std::optional<double> traj_lambda, traj_reference;
    auto* traj = app.add_subcommand("trajectory-check", "quantum-jump Monte Carlo vs closed form");
    traj->add_option("--config", traj_config, "JSON or TOML config file");
    traj->add_option("--lambda-c", traj_lambda, "cavity decay rate");
    traj->add_option("--reference-lambda-c", traj_reference, "decay rate used for the closed-form reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSpecError;
    }

    try {
        if (*amplitudes) return run_amplitudes(amp_config, amp_lambda, amp_tmax, amp_step, amp_tol, amp_out);
        if (*fidelity) return run_grid("fidelity-surface", fidelity_opts);
        if (*nm) return run_grid("nm-map", nm_opts);
        if (*chsh_map) return run_grid("chsh-map", chsh_opts);
        if (*corr) return run_grid("corr-map", corr_opts);
        if (*traj) return run_trajectory(traj_config, traj_lambda, traj_reference);
    } catch (const std::exception& e) {
        std::cerr << "cqedlab: " << e.what() << '\n';
        return kExitSpecError;
    }
    return kExitSpecError;
}
