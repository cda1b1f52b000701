#pragma once

// Configuration for the cqedlab subcommands: a JSON or TOML file, overridden
// by command-line flags, on top of per-subcommand defaults.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cqed/scan.hpp"
#include "cqed/trajectory.hpp"

namespace cqed {

/// Reads a config file. Files ending in .toml are parsed as TOML and converted
/// to the equivalent JSON document; everything else is parsed as JSON.
/// Throws std::invalid_argument on unreadable or malformed input.
nlohmann::json load_config_document(const std::string& path);
nlohmann::json parse_toml_document(std::string_view text);

/// Flag-level overrides shared by the grid subcommands.
struct ScanOverrides {
    std::optional<double> lambda_c;
    std::optional<double> a_re;
    std::optional<double> a_im;
    std::optional<double> t_max;
    std::optional<double> step;
    std::optional<double> tau;
    std::optional<double> epsilon;
    std::optional<std::string> partition;
    std::optional<std::string> quantity;  // --witness / --measure
    std::optional<std::string> out;
    std::optional<std::string> format;
};

/// Subcommand defaults: fidelity-surface, nm-map, chsh-map or corr-map.
ScanSpec default_scan_spec(std::string_view subcommand);

/// defaults <- config document <- overrides. Amplitudes are normalized; a lone
/// a (or b) is completed with a real partner. Throws std::invalid_argument.
ScanSpec build_scan_spec(std::string_view subcommand, const nlohmann::json& config, const ScanOverrides& overrides);

struct TrajectoryCheckSetup {
    TrajectoryConfig config;
    ModelParams reference;  // closed-form side of the comparison
};

/// Keys: coupling, lambda_c, checkpoints, n_traj, seed, dt, workers,
/// reference_lambda_c, reference_coupling.
TrajectoryCheckSetup build_trajectory_setup(const nlohmann::json& config, std::optional<double> lambda_c);

struct AmplitudeTableSpec {
    ModelParams params;
    double t_max = 10.0;
    double step = 0.1;
    std::optional<double> ode_tol;  // adds the ODE oracle columns when set
};

AmplitudeTableSpec build_amplitude_spec(const nlohmann::json& config, std::optional<double> lambda_c,
                                        std::optional<double> t_max, std::optional<double> step);

/// CSV: t,regime,xi_re,xi_im,eta_re,eta_im,p,q,gamma_d[,ode_atom,ode_cavity].
void write_amplitude_table(const AmplitudeTableSpec& spec, std::ostream& out);

}  // namespace cqed
