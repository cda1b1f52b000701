// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/measures.hpp"
#include "cqed/scan.hpp"
#include "cqed/trajectory.hpp"
#include "cqed/witnesses.hpp"

using namespace cqed;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);
const double kTsirelson = 2.0 * std::sqrt(2.0);

struct Outcome {
    bool passed = false;
    std::string detail;
};

ModelParams make_params(double lambda, Complex a = kInvSqrt2) {
    ModelParams p;
    p.cavity_decay = lambda;
    p.amp_a = a;
    p.amp_b = std::sqrt(1.0 - std::norm(a));
    return p;
}

std::vector<double> range(double lo, double hi, double step) { return Axis{AxisName::T, lo, hi, step}.values(); }

std::string fmt(const char* pattern, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, pattern, args...);
    return buffer;
}

// 1. F2 has a local minimum at t = 1 with value 1 - e^-2 at the exceptional point.
Outcome ep_fidelity_minimum() {
    const ModelParams params = make_params(4.0);
    auto f2 = [&](double t) { return fidelity_closed_form(FidelityIndex::F2, params, t); };

    const std::vector<double> grid = range(0.0, 4.0, 0.01);
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (f2(grid[i]) < f2(grid[i - 1]) && f2(grid[i]) <= f2(grid[i + 1])) {
            best = i;
            break;
        }
    }
    if (best == 0) return {false, "no interior local minimum on the grid"};

    // Bisection on the central-difference derivative inside the bracketing cells.
    const double h = 1e-5;
    auto slope = [&](double t) { return (f2(t + h) - f2(t - h)) / (2.0 * h); };
    double lo = grid[best - 1];
    double hi = grid[best + 1];
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const double t_min = 0.5 * (lo + hi);
    const double value = f2(t_min);
    const double expected = 1.0 - std::exp(-2.0);
    const bool ok = std::abs(t_min - 1.0) <= 0.005 && std::abs(value - expected) <= 1e-9;
    return {ok, fmt("t_min=%.6f (tol 0.005), F2=%.12f vs 1-e^-2=%.12f (tol 1e-9)", t_min, value, expected)};
}

// 2. Closed-form fidelities vs the generic eigendecomposition fidelity.
Outcome closed_vs_generic_fidelity() {
    double worst = 0.0;
    std::size_t cells = 0;
    for (double a : {kInvSqrt2, kInvSqrt5}) {
        for (double lambda : range(0.0, 5.0, 0.5)) {
            const ModelParams params = make_params(lambda, a);
            for (FidelityIndex index : kAllFidelityIndices) {
                const Partition partition = partition_of(index);
                const TwoQubitState initial = reduced_state(partition, params, 0.0);
                for (double t : range(0.0, 4.0, 0.05)) {
                    const double generic = fidelity(initial, reduced_state(partition, params, t));
                    worst = std::max(worst, std::abs(generic - fidelity_closed_form(index, params, t)));
                    ++cells;
                }
            }
        }
    }
    return {worst <= 1e-8, fmt("max |closed - generic| = %.3e over %zu evaluations (tol 1e-8)", worst, cells)};
}

// 3. Closed-form dynamics vs RK4 integration, and continuity across the exceptional point.
Outcome dynamics_oracle() {
    double worst = 0.0;
    for (double lambda : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 8.0}) {
        const ModelParams params = make_params(lambda);
        for (double t : range(0.0, 10.0, 0.1)) {
            const ExcitationProbabilities closed = excitation_probabilities(params, t);
            const Amplitudes ode = amplitudes_ode(params, t, 1e-11);
            worst = std::max(worst, std::abs(closed.p - (1.0 - std::norm(ode.xi))));
            worst = std::max(worst, std::abs(closed.q - std::norm(ode.eta)));
        }
    }
    double jump = 0.0;
    for (double t : range(0.0, 10.0, 0.01)) {
        const auto at = excitation_probabilities(make_params(4.0), t);
        for (double lambda : {4.0 - 1e-6, 4.0 + 1e-6}) {
            const auto near = excitation_probabilities(make_params(lambda), t);
            jump = std::max({jump, std::abs(near.p - at.p), std::abs(near.q - at.q)});
        }
    }
    const bool ok = worst <= 1e-8 && jump <= 1e-5;
    return {ok, fmt("max |closed - ODE| = %.3e (tol 1e-8), EP continuity %.3e (tol 1e-5)", worst, jump)};
}

// 4. Quantum-jump ensemble vs closed form on 60 (lambda_c, t, population) cells.
Outcome trajectory_statistics() {
    std::size_t misses3 = 0, misses5 = 0, cells = 0;
    double worst_z = 0.0;
    for (double lambda : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        TrajectoryConfig config;
        config.params = make_params(lambda);
        config.checkpoints = {0.5, 1.0, 2.0, 4.0};
        config.n_traj = 100000;
        config.seed = 20240601;
        const TrajectoryReport report = run_trajectory_check(config);
        misses3 += report.misses_3sigma;
        misses5 += report.misses_5sigma;
        cells += report.rows.size();
        for (const TrajectoryCheckRow& row : report.rows) worst_z = std::max(worst_z, std::abs(row.z));
    }
    const bool ok = cells == 60 && misses3 <= 2 && misses5 == 0;
    return {ok, fmt("%zu cells, %zu beyond 3 SE (max 2), %zu beyond 5 SE (max 0), max |z| = %.2f", cells, misses3,
                    misses5, worst_z)};
}

// 5. CHSH anchors and the Tsirelson bound on the default grid.
Outcome bell_anchors() {
    const double aa = chsh(reduced_state(Partition::AtomAtom, make_params(1.0), 0.0)).value;
    const double ground = chsh(TwoQubitState::x_form(1.0, 0.0, 0.0, 0.0)).value;
    const double rr = chsh(reduced_state(Partition::ReservoirReservoir, make_params(1.0), 50.0)).value;

    double highest = 0.0;
    for (double a : {kInvSqrt2, kInvSqrt5}) {
        for (Partition p : kAllPartitions) {
            ScanSpec spec;
            spec.quantity = ScanQuantity::Chsh;
            spec.partition = p;
            spec.amp_a = a;
            spec.amp_b = std::sqrt(1.0 - a * a);
            const WitnessGrid grid = run_scan(spec);
            for (double v : grid.values) highest = std::max(highest, v);
        }
    }
    const bool ok = std::abs(aa - kTsirelson) <= 1e-9 && std::abs(ground - 2.0) <= 1e-9 &&
                    std::abs(rr - kTsirelson) <= 1e-3 && highest <= kTsirelson + 1e-9;
    return {ok, fmt("atom-atom t=0 %.12f, |00> %.12f, reservoir t=50 %.6f, grid max %.12f (bound %.12f)", aa, ground,
                    rr, highest, kTsirelson)};
}

WitnessGrid lag_map(ScanQuantity quantity, Partition partition, double lambda) {
    ScanSpec spec;
    spec.quantity = quantity;
    spec.partition = partition;
    spec.axis1 = {AxisName::T, 0.0, 4.0, 0.02};
    spec.axis2 = {AxisName::Tau, 0.0, 4.0, 0.02};
    spec.lambda_c = lambda;
    return run_scan(spec);
}

std::size_t violating_cells(Partition partition) {
    ScanSpec spec;
    spec.quantity = ScanQuantity::Chsh;
    spec.partition = partition;
    return summarize(run_scan(spec)).count(CellFlag::Violating);
}

// 6. Qualitative region structure of the witness and Bell maps.
Outcome region_structure() {
    std::string detail;
    bool ok = true;

    const GridSummary ar0 = summarize(lag_map(ScanQuantity::FidelityDiff, Partition::AtomReservoirIntra, 0.0));
    const GridSummary ar3 = summarize(lag_map(ScanQuantity::FidelityDiff, Partition::AtomReservoirIntra, 3.0));
    const double f0 = ar0.fraction(CellFlag::Negative);
    const double f3 = ar3.fraction(CellFlag::Negative);
    const bool a = f0 > 0.0 && ar0.max_value > 0.0 && f3 < f0;
    ok &= a;
    detail += fmt("(a) atom-reservoir G negative fraction %.4f at 0 -> %.4f at 3 %s; ", f0, f3, a ? "ok" : "FAILED");

    const std::size_t g_neg =
        summarize(lag_map(ScanQuantity::FidelityDiff, Partition::CavityCavity, 4.0)).count(CellFlag::Negative);
    const std::size_t d_neg =
        summarize(lag_map(ScanQuantity::TraceDistDiff, Partition::CavityCavity, 4.0)).count(CellFlag::Negative);
    const bool b = g_neg > 0 && d_neg > 0;
    ok &= b;
    detail += fmt("(b) cavity-cavity at 4: %zu negative G, %zu negative D cells %s; ", g_neg, d_neg, b ? "ok" : "FAILED");

    double ac_min = 0.0;
    for (double lambda : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
        const GridSummary s = summarize(lag_map(ScanQuantity::FidelityDiff, Partition::AtomCavityIntra, lambda));
        ac_min = std::min(ac_min, s.min_value);
    }
    const bool c = ac_min >= -1e-9;
    ok &= c;
    detail += fmt("(c) atom-cavity G min %.3e over lambda_c 0..5 %s; ", ac_min, c ? "ok" : "FAILED");

    const std::size_t rr = violating_cells(Partition::ReservoirReservoir);
    const std::size_t aa = violating_cells(Partition::AtomAtom);
    const std::size_t cc = violating_cells(Partition::CavityCavity);
    const std::size_t cross = violating_cells(Partition::AtomReservoirCross);
    const bool d = rr > aa && rr > cc && rr > cross;
    ok &= d;
    detail += fmt("(d) violating cells reservoir %zu, atom %zu, cavity %zu, cross %zu %s", rr, aa, cc, cross,
                  d ? "ok" : "FAILED");
    return {ok, detail};
}

// 7. Correlation identities and the discord oracle.
Outcome correlation_identities() {
    const Partition families[] = {Partition::AtomAtom, Partition::CavityCavity, Partition::ReservoirReservoir};
    const std::vector<double> ts = range(0.0, 4.0, 0.02);
    const std::vector<double> lambdas = range(0.0, 4.0, 0.05);

    double identity = 0.0;
    double lowest = 0.0;
    for (Partition family : families) {
        for (double lambda : lambdas) {
            const ModelParams params = make_params(lambda);
            for (double t : ts) {
                const double c = classical_correlation_closed(family, params, t);
                const double d = quantum_discord_closed(family, params, t);
                const double i = mutual_information(reduced_state(family, params, t));
                identity = std::max(identity, std::abs(i - c - d));
                lowest = std::min({lowest, c, d});
            }
        }
    }

    const ModelParams base = make_params(1.0);
    const double c0 = classical_correlation_closed(Partition::AtomAtom, base, 0.0);
    const double d0 = quantum_discord_closed(Partition::AtomAtom, base, 0.0);
    double vacuum = 0.0;
    for (Partition family : {Partition::CavityCavity, Partition::ReservoirReservoir}) {
        vacuum = std::max({vacuum, std::abs(classical_correlation_closed(family, base, 0.0)),
                           std::abs(quantum_discord_closed(family, base, 0.0)),
                           std::abs(mutual_information(reduced_state(family, base, 0.0)))});
    }

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick_family(0, 2), pick_t(0, ts.size() - 1),
        pick_lambda(0, lambdas.size() - 1);
    double oracle_gap = 0.0;
    double excess = 0.0;  // largest closed - numeric, i.e. closed form above the optimized value
    std::size_t beyond = 0;
    for (int k = 0; k < 50; ++k) {
        const Partition family = families[pick_family(rng)];
        const double t = ts[pick_t(rng)];
        const ModelParams params = make_params(lambdas[pick_lambda(rng)]);
        const double closed = quantum_discord_closed(family, params, t);
        const double numeric = discord_numeric(reduced_state(family, params, t), 48);
        oracle_gap = std::max(oracle_gap, std::abs(closed - numeric));
        excess = std::max(excess, closed - numeric);
        if (std::abs(closed - numeric) > 1e-3) ++beyond;
    }

    const bool ok = identity <= 1e-9 && lowest >= -1e-9 && std::abs(c0 - 1.0) <= 1e-9 && std::abs(d0 - 1.0) <= 1e-9 &&
                    vacuum <= 1e-9;
    std::string detail = fmt("max |I - C - D| = %.3e (tol 1e-9), min(C, D) = %.3e, C(0) = %.12f, D(0) = %.12f, "
                             "cavity/reservoir at t=0 %.3e; discord oracle max gap %.3e on 50 points, %zu beyond 1e-3",
                             identity, lowest, c0, d0, vacuum, oracle_gap, beyond);
    if (beyond > 0) detail += fmt(" [finding: closed form exceeds optimum by up to %.3e]", excess);
    return {ok, detail};
}

// 8. Definitional zeros of the difference witnesses.
Outcome witness_zeros() {
    const Complex amplitudes[] = {Complex(kInvSqrt2, 0.0), Complex(kInvSqrt5, 0.0), Complex(0.3, 0.4)};
    double worst = 0.0;
    std::size_t evaluations = 0;
    for (Partition p : kAllPartitions) {
        for (double lambda : range(0.0, 5.0, 0.5)) {
            for (Complex a : amplitudes) {
                const ModelParams params = make_params(lambda, a);
                for (double x : range(0.0, 4.0, 0.25)) {
                    const double values[] = {
                        fidelity_difference(p, params, 0.0, x).value(),
                        fidelity_difference(p, params, x, 0.0).value(),
                        trace_distance_difference(p, params, 0.0, x).value(),
                        trace_distance_difference(p, params, x, 0.0).value(),
                        relative_entropy_difference(p, params, 0.0, x, 0.0).value(),
                        relative_entropy_difference(p, params, 0.0, x, 1e-6).value(),
                    };
                    for (double v : values) {
                        worst = std::isnan(v) ? INFINITY : std::max(worst, std::abs(v));
                        ++evaluations;
                    }
                }
            }
        }
    }
    return {worst <= 1e-12, fmt("max |witness| = %.3e over %zu evaluations (tol 1e-12)", worst, evaluations)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "exceptional-point fidelity minimum", 1.0, ep_fidelity_minimum},
        {2, "closed-form vs generic fidelity", 10.0, closed_vs_generic_fidelity},
        {3, "dynamics vs ODE oracle", 5.0, dynamics_oracle},
        {4, "trajectory statistics", 60.0, trajectory_statistics},
        {5, "Bell anchors", 120.0, bell_anchors},
        {6, "region structure", 120.0, region_structure},
        {7, "correlation identities", 120.0, correlation_identities},
        {8, "witness definitional zeros", 60.0, witness_zeros},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds <= c.budget_s;
        const bool passed = outcome.passed && in_time;
        if (!passed) ++failures;
        std::printf("criterion %d %s: %s | %s | %.2f s (budget %.0f s)%s\n", c.id, c.name, passed ? "PASS" : "FAIL",
                    outcome.detail.c_str(), seconds, c.budget_s, in_time ? "" : " over budget");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
