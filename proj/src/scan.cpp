#include "cqed/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "cqed/measures.hpp"

namespace cqed {

namespace {

template <typename Enum, std::size_t N>
Enum parse_by_name(std::string_view name, const Enum (&all)[N], const char* what) {
    for (Enum e : all) {
        if (to_string(e) == name) return e;
    }
    throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

constexpr ScanQuantity kAllQuantities[] = {
    ScanQuantity::FidelitySurface, ScanQuantity::FidelityDiff,  ScanQuantity::TraceDistDiff,
    ScanQuantity::RelEntropyDiff,  ScanQuantity::Chsh,          ScanQuantity::ClassicalCorr,
    ScanQuantity::QuantumDiscord,  ScanQuantity::MutualInfo,
};
constexpr AxisName kAllAxes[] = {AxisName::T, AxisName::Tau, AxisName::LambdaC};
constexpr OutputFormat kAllFormats[] = {OutputFormat::Csv, OutputFormat::Json};
constexpr CellFlag kAllFlags[] = {CellFlag::Negative, CellFlag::NonNegative, CellFlag::Violating,
                                  CellFlag::Undefined};

bool uses_lag(ScanQuantity quantity) {
    return quantity == ScanQuantity::FidelityDiff || quantity == ScanQuantity::TraceDistDiff ||
           quantity == ScanQuantity::RelEntropyDiff;
}

void validate_axis(const Axis& axis) {
    const std::string name(to_string(axis.name));
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || !std::isfinite(axis.step)) {
        throw std::invalid_argument("axis " + name + " has a non-finite bound or step");
    }
    if (!(axis.step > 0.0)) throw std::invalid_argument("axis " + name + " needs a positive step");
    if (axis.max < axis.min) throw std::invalid_argument("axis " + name + " has max < min");
    if (axis.min < 0.0) throw std::invalid_argument("axis " + name + " must be non-negative");
}

}  // namespace

std::string_view to_string(ScanQuantity quantity) {
    switch (quantity) {
        case ScanQuantity::FidelitySurface: return "fidelity";
        case ScanQuantity::FidelityDiff: return "fidelity-diff";
        case ScanQuantity::TraceDistDiff: return "trace-distance-diff";
        case ScanQuantity::RelEntropyDiff: return "relative-entropy-diff";
        case ScanQuantity::Chsh: return "chsh";
        case ScanQuantity::ClassicalCorr: return "classical-correlation";
        case ScanQuantity::QuantumDiscord: return "quantum-discord";
        case ScanQuantity::MutualInfo: return "mutual-information";
    }
    return "?";
}

ScanQuantity parse_scan_quantity(std::string_view name) { return parse_by_name(name, kAllQuantities, "quantity"); }

std::string_view to_string(AxisName name) {
    switch (name) {
        case AxisName::T: return "t";
        case AxisName::Tau: return "tau";
        case AxisName::LambdaC: return "lambda_c";
    }
    return "?";
}

AxisName parse_axis_name(std::string_view name) { return parse_by_name(name, kAllAxes, "axis"); }

std::vector<double> Axis::values() const {
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = min + static_cast<double>(i) * step;
    return out;
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view name) { return parse_by_name(name, kAllFormats, "format"); }

std::string_view to_string(CellFlag flag) {
    switch (flag) {
        case CellFlag::Negative: return "negative";
        case CellFlag::NonNegative: return "non-negative";
        case CellFlag::Violating: return "violating";
        case CellFlag::Undefined: return "undefined";
    }
    return "?";
}

CellFlag parse_cell_flag(std::string_view name) { return parse_by_name(name, kAllFlags, "cell flag"); }

void validate(const ScanSpec& spec) {
    validate_axis(spec.axis1);
    validate_axis(spec.axis2);
    if (spec.axis1.name == spec.axis2.name) throw std::invalid_argument("the two scan axes must differ");
    ModelParams params;
    params.coupling = spec.coupling;
    params.cavity_decay = spec.lambda_c;
    params.amp_a = spec.amp_a;
    params.amp_b = spec.amp_b;
    validate(params);
    if (!(spec.t >= 0.0) || !(spec.tau >= 0.0)) throw std::invalid_argument("fixed t and tau must be non-negative");

    const bool tau_axis = spec.axis1.name == AxisName::Tau || spec.axis2.name == AxisName::Tau;
    if (tau_axis && !uses_lag(spec.quantity)) {
        throw std::invalid_argument(std::string(to_string(spec.quantity)) + " has no tau dependence");
    }
    if ((spec.quantity == ScanQuantity::ClassicalCorr || spec.quantity == ScanQuantity::QuantumDiscord) &&
        !is_equivalent_pair(spec.partition)) {
        throw std::invalid_argument("closed-form correlations need atom-atom, cavity-cavity or reservoir-reservoir");
    }
    if (!(spec.regularizer_eps >= 0.0) || spec.regularizer_eps > 1.0) {
        throw std::invalid_argument("regularizer epsilon must lie in [0, 1]");
    }
}

CellFlag classify(ScanQuantity quantity, double value) {
    if (std::isnan(value)) return CellFlag::Undefined;
    if (quantity == ScanQuantity::Chsh) {
        return value > kBellClassicalBound ? CellFlag::Violating : CellFlag::NonNegative;
    }
    return value < -kNegativeFlagTol ? CellFlag::Negative : CellFlag::NonNegative;
}

CellPoint cell_point(const ScanSpec& spec, double axis1_value, double axis2_value) {
    CellPoint point;
    point.params.coupling = spec.coupling;
    point.params.cavity_decay = spec.lambda_c;
    point.params.amp_a = spec.amp_a;
    point.params.amp_b = spec.amp_b;
    point.t = spec.t;
    point.tau = spec.tau;
    auto assign = [&](AxisName name, double value) {
        switch (name) {
            case AxisName::T: point.t = value; break;
            case AxisName::Tau: point.tau = value; break;
            case AxisName::LambdaC: point.params.cavity_decay = value; break;
        }
    };
    assign(spec.axis1.name, axis1_value);
    assign(spec.axis2.name, axis2_value);
    return point;
}

double evaluate_cell(const ScanSpec& spec, const CellPoint& point) {
    const ModelParams& params = point.params;
    switch (spec.quantity) {
        case ScanQuantity::FidelitySurface: {
            if (const auto index = fidelity_index_of(spec.partition)) {
                return fidelity_closed_form(*index, params, point.t);
            }
            return fidelity(reduced_state(spec.partition, params, 0.0), reduced_state(spec.partition, params, point.t));
        }
        case ScanQuantity::FidelityDiff:
            return fidelity_difference(spec.partition, params, point.t, point.tau).value();
        case ScanQuantity::TraceDistDiff:
            return trace_distance_difference(spec.partition, params, point.t, point.tau).value();
        case ScanQuantity::RelEntropyDiff:
            return relative_entropy_difference(spec.partition, params, point.t, point.tau, spec.regularizer_eps)
                .value();
        case ScanQuantity::Chsh: return chsh(reduced_state(spec.partition, params, point.t)).value;
        case ScanQuantity::ClassicalCorr: return classical_correlation_closed(spec.partition, params, point.t);
        case ScanQuantity::QuantumDiscord: return quantum_discord_closed(spec.partition, params, point.t);
        case ScanQuantity::MutualInfo: return mutual_information(reduced_state(spec.partition, params, point.t));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

WitnessGrid run_scan(const ScanSpec& spec, unsigned workers) {
    validate(spec);
    WitnessGrid grid;
    grid.spec = spec;
    grid.axis1 = spec.axis1.values();
    grid.axis2 = spec.axis2.values();
    const std::size_t rows = grid.axis1.size();
    const std::size_t cols = grid.axis2.size();
    grid.values.assign(rows * cols, 0.0);
    grid.flags.assign(rows * cols, CellFlag::Undefined);

    // Each cell is written by exactly one worker; rows are dealt round-robin.
    auto fill_rows = [&](unsigned worker, unsigned stride) {
        for (std::size_t i = worker; i < rows; i += stride) {
            for (std::size_t j = 0; j < cols; ++j) {
                const double value = evaluate_cell(spec, cell_point(spec, grid.axis1[i], grid.axis2[j]));
                grid.values[i * cols + j] = value;
                grid.flags[i * cols + j] = classify(spec.quantity, value);
            }
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w, workers);
    }
    return grid;
}

GridSummary summarize(const WitnessGrid& grid) {
    GridSummary summary;
    summary.cells = grid.values.size();
    const std::size_t cols = grid.axis2.size();
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        ++summary.counts[static_cast<std::size_t>(grid.flags[k])];
        const double v = grid.values[k];
        if (std::isnan(v)) continue;
        const std::pair<double, double> where{grid.axis1[k / cols], grid.axis2[k % cols]};
        if (!summary.has_values || v < summary.min_value) {
            summary.min_value = v;
            summary.min_at = where;
        }
        if (!summary.has_values || v > summary.max_value) {
            summary.max_value = v;
            summary.max_at = where;
        }
        summary.has_values = true;
    }
    for (std::size_t f = 0; f < kCellFlagCount; ++f) {
        summary.fractions[f] = summary.cells == 0 ? 0.0
                                                  : static_cast<double>(summary.counts[f]) /
                                                        static_cast<double>(summary.cells);
    }
    return summary;
}

double z_score(double estimate, double analytic, double se) {
    const double diff = estimate - analytic;
    if (se > 0.0) return diff / se;
    if (std::abs(diff) <= 1e-9) return 0.0;
    return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

TrajectoryReport run_trajectory_check(const TrajectoryConfig& config, const ModelParams& reference) {
    const TrajectoryEstimate estimate = simulate(config);
    TrajectoryReport report;
    for (const CheckpointEstimate& e : estimate.checkpoints) {
        const ExcitationProbabilities exact = excitation_probabilities(reference, e.t);
        const std::array<TrajectoryCheckRow, 3> rows{{
            {e.t, "atom", 1.0 - exact.p, e.est_atom, e.se_atom, 0.0},
            {e.t, "cavity", exact.q, e.est_cavity, e.se_cavity, 0.0},
            {e.t, "reservoir", exact.gamma_d, e.est_reservoir, e.se_reservoir, 0.0},
        }};
        for (TrajectoryCheckRow row : rows) {
            row.z = z_score(row.estimate, row.analytic, row.se);
            if (std::abs(row.z) > 3.0) ++report.misses_3sigma;
            if (std::abs(row.z) > 5.0) ++report.misses_5sigma;
            report.rows.push_back(row);
        }
    }
    report.allowed_3sigma = report.rows.size() / 30;
    report.passed = report.misses_3sigma <= report.allowed_3sigma && report.misses_5sigma == 0;
    return report;
}

}  // namespace cqed
