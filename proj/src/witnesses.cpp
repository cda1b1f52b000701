#include "cqed/witnesses.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cqed {

std::string_view to_string(WitnessKind kind) {
    switch (kind) {
        case WitnessKind::FidelityDiff: return "fidelity-diff";
        case WitnessKind::TraceDistDiff: return "trace-distance-diff";
        case WitnessKind::RelEntropyDiff: return "relative-entropy-diff";
        case WitnessKind::Chsh: return "chsh";
        case WitnessKind::ClassicalCorr: return "classical-correlation";
        case WitnessKind::QuantumDiscord: return "quantum-discord";
        case WitnessKind::MutualInfo: return "mutual-information";
    }
    return "?";
}

namespace {

void require_lag(double t, double tau) {
    if (!(t >= 0.0) || !(tau >= 0.0)) throw std::invalid_argument("t and tau must be non-negative");
}

struct StatePair {
    Matrix4c initial, lagged, current, current_lagged;
};

StatePair evolve(Partition partition, const ModelParams& params, double t, double tau) {
    return {reduced_state(partition, params, 0.0).matrix(), reduced_state(partition, params, tau).matrix(),
            reduced_state(partition, params, t).matrix(), reduced_state(partition, params, t + tau).matrix()};
}

double single_excitation_weight(Partition family, const ModelParams& params, double t) {
    const ExcitationProbabilities probs = excitation_probabilities(params, t);
    switch (family) {
        case Partition::AtomAtom: return 1.0 - probs.p;
        case Partition::CavityCavity: return probs.q;
        case Partition::ReservoirReservoir: return probs.gamma_d;
        default: break;
    }
    throw std::invalid_argument("closed-form correlations exist only for atom-atom, cavity-cavity and "
                                "reservoir-reservoir, not " + std::string(to_string(family)));
}

// H((1 + sqrt(1 - 4|a|^2 x (1-x))) / 2), shared by the classical and discord closed forms.
double conditional_term(double a2, double x) {
    const double radicand = std::max(0.0, 1.0 - 4.0 * a2 * x * (1.0 - x));
    return binary_entropy(0.5 * (1.0 + std::sqrt(radicand)));
}

double entropy_2x2(const Matrix2c& m) {
    // Eigenvalues of a Hermitian 2x2: (tr +- sqrt((a-d)^2 + 4|b|^2)) / 2.
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double split = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(m(0, 1)));
    double s = 0.0;
    for (double l : {0.5 * (a + d + split), 0.5 * (a + d - split)}) {
        if (l > kEntropyZero) s -= l * std::log2(l);
    }
    return s;
}

// Average conditional entropy of the first qubit after measuring the second one
// in the basis {|k>, |k_perp>}, |k> = (cos(theta/2), e^{i phi} sin(theta/2)).
double measured_conditional_entropy(const Matrix4c& rho, double theta, double phi) {
    const Complex phase = std::polar(1.0, phi);
    const std::array<std::array<Complex, 2>, 2> basis{{
        {Complex(std::cos(theta / 2.0), 0.0), phase * std::sin(theta / 2.0)},
        {-std::conj(phase) * std::sin(theta / 2.0), Complex(std::cos(theta / 2.0), 0.0)},
    }};
    double total = 0.0;
    for (const auto& k : basis) {
        Matrix2c cond = Matrix2c::Zero();
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                for (int m = 0; m < 2; ++m) {
                    for (int n = 0; n < 2; ++n) {
                        cond(i, j) += std::conj(k[m]) * rho(2 * i + m, 2 * j + n) * k[n];
                    }
                }
            }
        }
        const double prob = cond.trace().real();
        if (prob > 1e-14) total += prob * entropy_2x2(cond / prob);
    }
    return total;
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi, int iterations, double& argmax) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iterations; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    argmax = f1 > f2 ? x1 : x2;
    return std::max(f1, f2);
}

}  // namespace

WitnessValue fidelity_difference(Partition partition, const ModelParams& params, double t, double tau) {
    require_lag(t, tau);
    if (t == 0.0 || tau == 0.0) return WitnessValue::finite(0.0);
    const StatePair s = evolve(partition, params, t, tau);
    const double reference = fidelity(s.initial, s.lagged);
    if (reference < kWitnessDenominatorFloor) return WitnessValue::undefined();
    return WitnessValue::finite((fidelity(s.current, s.current_lagged) - reference) / reference);
}

WitnessValue trace_distance_difference(Partition partition, const ModelParams& params, double t, double tau) {
    require_lag(t, tau);
    if (t == 0.0 || tau == 0.0) return WitnessValue::finite(0.0);
    const StatePair s = evolve(partition, params, t, tau);
    const double reference = trace_distance(s.initial, s.lagged);
    if (reference < kWitnessDenominatorFloor) return WitnessValue::undefined();
    return WitnessValue::finite((reference - trace_distance(s.current, s.current_lagged)) / reference);
}

WitnessValue relative_entropy_difference(Partition partition, const ModelParams& params, double t, double tau,
                                         double regularizer_eps) {
    require_lag(t, tau);
    if (!(regularizer_eps >= 0.0) || regularizer_eps > 1.0) {
        throw std::invalid_argument("regularizer epsilon must lie in [0, 1]");
    }
    if (t == 0.0 || tau == 0.0) return WitnessValue::finite(0.0);

    StatePair s = evolve(partition, params, t, tau);
    if (regularizer_eps > 0.0) {
        const Matrix4c mixed = Matrix4c::Identity() * 0.25;
        s.lagged = (1.0 - regularizer_eps) * s.lagged + regularizer_eps * mixed;
        s.current_lagged = (1.0 - regularizer_eps) * s.current_lagged + regularizer_eps * mixed;
    }
    const double reference = relative_entropy(s.initial, s.lagged);
    if (!std::isfinite(reference) || reference < kWitnessDenominatorFloor) return WitnessValue::undefined();
    const double later = relative_entropy(s.current, s.current_lagged);
    if (!std::isfinite(later)) return WitnessValue::infinite(/*negative=*/true);
    return WitnessValue::finite((reference - later) / reference);
}

ChshResult chsh(const TwoQubitState& state) {
    const auto violations = validate_state(state);
    if (std::find(violations.begin(), violations.end(), StateViolation::NotXForm) != violations.end()) {
        throw std::invalid_argument("chsh requires an X-form state with u44 = 0");
    }
    const double coherence_sq = std::norm(state.u23());
    const double z = state.u11() - state.u22() - state.u33();
    const double b1 = 2.0 * std::sqrt(4.0 * coherence_sq + z * z);
    const double b2 = 2.0 * std::sqrt(2.0 * coherence_sq);
    return b2 > b1 ? ChshResult{b2, ChshBranch::B2} : ChshResult{b1, ChshBranch::B1};
}

double chsh_horodecki(const Matrix4c& rho) {
    const std::array<Matrix2c, 3> pauli = [] {
        Matrix2c x, y, z;
        x << 0, 1, 1, 0;
        y << 0, Complex(0, -1), Complex(0, 1), 0;
        z << 1, 0, 0, -1;
        return std::array<Matrix2c, 3>{x, y, z};
    }();
    Eigen::Matrix3d corr;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Matrix4c op;
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) op.block<2, 2>(2 * r, 2 * c) = pauli[i](r, c) * pauli[j];
            }
            corr(i, j) = (rho * op).trace().real();
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(corr.transpose() * corr, Eigen::EigenvaluesOnly);
    // Ascending order: the two largest are the last two.
    const double top_two = eig.eigenvalues()(2) + eig.eigenvalues()(1);
    return 2.0 * std::sqrt(std::max(0.0, top_two));
}

double classical_correlation_closed(Partition family, const ModelParams& params, double t) {
    const double x = single_excitation_weight(family, params, t);
    const double a2 = std::norm(params.amp_a);
    return binary_entropy(a2 * x) - conditional_term(a2, x);
}

double quantum_discord_closed(Partition family, const ModelParams& params, double t) {
    const double x = single_excitation_weight(family, params, t);
    const double a2 = std::norm(params.amp_a);
    const double b2 = std::norm(params.amp_b);
    return binary_entropy(b2 * x) - binary_entropy(x) + conditional_term(a2, x);
}

double mutual_information(const TwoQubitState& state) {
    const Matrix4c& rho = state.matrix();
    return von_neumann_entropy(partial_trace(rho, true)) + von_neumann_entropy(partial_trace(rho, false)) -
           von_neumann_entropy(rho);
}

double discord_numeric(const TwoQubitState& state, int angular_resolution) {
    if (angular_resolution < 2) throw std::invalid_argument("angular_resolution must be at least 2");
    const Matrix4c& rho = state.matrix();
    const double unmeasured_entropy = von_neumann_entropy(partial_trace(rho, true));
    auto induced = [&](double theta, double phi) {
        return unmeasured_entropy - measured_conditional_entropy(rho, theta, phi);
    };

    const double pi = std::numbers::pi;
    const int n_theta = angular_resolution;
    const int n_phi = 2 * angular_resolution;
    const double d_theta = pi / (n_theta - 1);
    const double d_phi = 2.0 * pi / n_phi;

    double best = -std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    double best_phi = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const double theta = i * d_theta;
            const double phi = j * d_phi;
            const double value = induced(theta, phi);
            if (value > best) {
                best = value;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    // Coordinate-wise golden-section refinement inside the winning grid cell.
    double half_theta = d_theta;
    double half_phi = d_phi;
    for (int round = 0; round < 4; ++round) {
        double arg = best_theta;
        const double by_theta = golden_section_max([&](double th) { return induced(th, best_phi); },
                                                   std::max(0.0, best_theta - half_theta),
                                                   std::min(pi, best_theta + half_theta), 40, arg);
        if (by_theta > best) {
            best = by_theta;
            best_theta = arg;
        }
        arg = best_phi;
        const double by_phi = golden_section_max([&](double ph) { return induced(best_theta, ph); },
                                                 best_phi - half_phi, best_phi + half_phi, 40, arg);
        if (by_phi > best) {
            best = by_phi;
            best_phi = arg;
        }
        half_theta *= 0.5;
        half_phi *= 0.5;
    }
    return std::max(0.0, mutual_information(state) - best);
}

}  // namespace cqed
