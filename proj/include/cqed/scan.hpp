#pragma once

// Parameter-grid sweeps over the model's witnesses and fidelities, plus the
// trajectory-vs-analytic consistency report.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/states.hpp"
#include "cqed/trajectory.hpp"
#include "cqed/witnesses.hpp"

namespace cqed {

/// What a scan evaluates at each grid cell.
enum class ScanQuantity {
    FidelitySurface,  // F[rho(0), rho(t)]
    FidelityDiff,
    TraceDistDiff,
    RelEntropyDiff,
    Chsh,
    ClassicalCorr,
    QuantumDiscord,
    MutualInfo,
};

std::string_view to_string(ScanQuantity quantity);
ScanQuantity parse_scan_quantity(std::string_view name);

enum class AxisName { T, Tau, LambdaC };

std::string_view to_string(AxisName name);
AxisName parse_axis_name(std::string_view name);

struct Axis {
    AxisName name = AxisName::T;
    double min = 0.0;
    double max = 4.0;
    double step = 0.02;

    /// min + i * step for i = 0 .. floor((max - min) / step) (with a 1e-9 slack).
    std::vector<double> values() const;
};

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view name);

struct ScanSpec {
    ScanQuantity quantity = ScanQuantity::FidelitySurface;
    Partition partition = Partition::AtomAtom;
    Axis axis1{AxisName::T, 0.0, 4.0, 0.02};
    Axis axis2{AxisName::LambdaC, 0.0, 4.0, 0.05};
    // Values of the parameters that are not swept.
    double coupling = 1.0;
    double lambda_c = 0.0;
    double tau = 0.0;
    double t = 0.0;
    Complex amp_a{0.7071067811865476, 0.0};
    Complex amp_b{0.7071067811865476, 0.0};
    double regularizer_eps = 0.0;  // relative-entropy only
    std::string output;
    OutputFormat format = OutputFormat::Csv;
};

/// Throws std::invalid_argument describing the first problem found.
void validate(const ScanSpec& spec);

/// Per-cell classification.
enum class CellFlag { Negative, NonNegative, Violating, Undefined };

inline constexpr std::size_t kCellFlagCount = 4;

std::string_view to_string(CellFlag flag);
CellFlag parse_cell_flag(std::string_view name);

/// Values within this distance below zero are round-off, not witnesses.
inline constexpr double kNegativeFlagTol = 1e-10;
/// Classical bound of the CHSH-Bell function.
inline constexpr double kBellClassicalBound = 2.0;

/// Undefined for NaN; for Chsh Violating iff value > 2; otherwise Negative iff
/// value < -kNegativeFlagTol.
CellFlag classify(ScanQuantity quantity, double value);

struct WitnessGrid {
    ScanSpec spec;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> values;  // row-major, axis1 outer
    std::vector<CellFlag> flags;

    double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
    CellFlag flag_at(std::size_t i, std::size_t j) const { return flags[i * axis2.size() + j]; }
};

/// Model parameters of a cell (axis values override the spec's fixed values).
struct CellPoint {
    ModelParams params;
    double t = 0.0;
    double tau = 0.0;
};

CellPoint cell_point(const ScanSpec& spec, double axis1_value, double axis2_value);

/// Value of the spec's quantity at one point; NaN when undefined.
double evaluate_cell(const ScanSpec& spec, const CellPoint& point);

/// Evaluates every cell. Deterministic and independent of `workers`.
WitnessGrid run_scan(const ScanSpec& spec, unsigned workers = 1);

struct GridSummary {
    std::size_t cells = 0;
    std::array<std::size_t, kCellFlagCount> counts{};
    std::array<double, kCellFlagCount> fractions{};
    bool has_values = false;  // false when every cell is undefined
    double min_value = 0.0;
    double max_value = 0.0;
    std::pair<double, double> min_at{};
    std::pair<double, double> max_at{};

    std::size_t count(CellFlag flag) const { return counts[static_cast<std::size_t>(flag)]; }
    double fraction(CellFlag flag) const { return fractions[static_cast<std::size_t>(flag)]; }
};

GridSummary summarize(const WitnessGrid& grid);

struct TrajectoryCheckRow {
    double t = 0.0;
    std::string quantity;  // "atom", "cavity" or "reservoir"
    double analytic = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
};

struct TrajectoryReport {
    std::vector<TrajectoryCheckRow> rows;
    std::size_t misses_3sigma = 0;
    std::size_t misses_5sigma = 0;
    std::size_t allowed_3sigma = 0;
    bool passed = false;
};

/// z = (estimate - analytic) / se. With se = 0 (no stochasticity) z is 0 when
/// the two agree within 1e-9 and +-inf otherwise.
double z_score(double estimate, double analytic, double se);

/// Compares simulate(config) against the closed form evaluated with
/// `reference`. Passes when at most floor(cells / 30) cells miss at 3 sigma
/// and none at 5 sigma. Propagates ConvergenceError.
TrajectoryReport run_trajectory_check(const TrajectoryConfig& config, const ModelParams& reference);
inline TrajectoryReport run_trajectory_check(const TrajectoryConfig& config) {
    return run_trajectory_check(config, config.params);
}

}  // namespace cqed
