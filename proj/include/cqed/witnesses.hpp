#pragma once

// Non-Markovianity difference witnesses, the CHSH-Bell function and
// classical/quantum correlations of the model's two-qubit states.

#include <cmath>
#include <limits>
#include <string_view>

#include "cqed/measures.hpp"
#include "cqed/states.hpp"

namespace cqed {

enum class WitnessKind {
    FidelityDiff,
    TraceDistDiff,
    RelEntropyDiff,
    Chsh,
    ClassicalCorr,
    QuantumDiscord,
    MutualInfo,
};

std::string_view to_string(WitnessKind kind);

/// A witness value that may be undefined (vanishing denominator, infinite over
/// infinite) or infinite. Undefined values carry NaN, infinite ones +-inf.
class WitnessValue {
public:
    enum class Status { Finite, Infinite, Undefined };

    static WitnessValue finite(double v) { return {v, Status::Finite}; }
    static WitnessValue infinite(bool negative) {
        const double inf = std::numeric_limits<double>::infinity();
        return {negative ? -inf : inf, Status::Infinite};
    }
    static WitnessValue undefined() { return {std::numeric_limits<double>::quiet_NaN(), Status::Undefined}; }

    double value() const { return value_; }
    Status status() const { return status_; }
    bool is_finite() const { return status_ == Status::Finite; }
    bool is_undefined() const { return status_ == Status::Undefined; }

private:
    WitnessValue(double v, Status s) : value_(v), status_(s) {}

    double value_;
    Status status_;
};

/// Denominators below this make a difference witness undefined.
inline constexpr double kWitnessDenominatorFloor = 1e-12;

/// G(t, tau) = (F[rho(t), rho(t+tau)] - F[rho(0), rho(tau)]) / F[rho(0), rho(tau)].
/// Negative values witness non-Markovian evolution. Exactly 0 at t = 0 or tau = 0.
WitnessValue fidelity_difference(Partition partition, const ModelParams& params, double t, double tau);

/// D(t, tau) = (D[rho(0), rho(tau)] - D[rho(t), rho(t+tau)]) / D[rho(0), rho(tau)].
WitnessValue trace_distance_difference(Partition partition, const ModelParams& params, double t, double tau);

/// S(t, tau) = (S[rho(0)||rho(tau)] - S[rho(t)||rho(t+tau)]) / S[rho(0)||rho(tau)].
/// With regularizer_eps > 0 every second argument sigma is replaced by
/// (1 - eps) sigma + eps I/4.
WitnessValue relative_entropy_difference(Partition partition, const ModelParams& params, double t, double tau,
                                         double regularizer_eps = 0.0);

enum class ChshBranch { B1, B2 };

struct ChshResult {
    double value = 0.0;
    ChshBranch branch = ChshBranch::B1;
};

/// Bell function of an X-form state with u44 = 0:
///   B1 = 2 sqrt(4|u23|^2 + (u11 - u22 - u33)^2),  B2 = 2 sqrt(2|u23|^2),
/// value max(B1, B2), ties to B1. Throws std::invalid_argument on non-X-form input.
ChshResult chsh(const TwoQubitState& state);

/// Horodecki criterion 2 sqrt(m1 + m2), m1 >= m2 the two largest eigenvalues of
/// T^T T with T_ij = Tr[rho sigma_i (x) sigma_j]. Valid for any two-qubit state.
double chsh_horodecki(const Matrix4c& rho);
inline double chsh_horodecki(const TwoQubitState& state) { return chsh_horodecki(state.matrix()); }

/// Closed-form classical correlation of the atom-atom, cavity-cavity or
/// reservoir-reservoir state with single-excitation weight x (1-p, q, gamma_d):
///   C = H(|a|^2 x) - H((1 + sqrt(1 - 4|a|^2 x (1-x))) / 2).
/// Throws std::invalid_argument for other partitions.
double classical_correlation_closed(Partition family, const ModelParams& params, double t);

/// Closed-form discord I - C for the same families:
///   D = H(|b|^2 x) - H(x) + H((1 + sqrt(1 - 4|a|^2 x (1-x))) / 2).
double quantum_discord_closed(Partition family, const ModelParams& params, double t);

/// I = S(rho_A) + S(rho_B) - S(rho), in bits.
double mutual_information(const TwoQubitState& state);

/// Brute-force discord: I(rho) minus the largest measurement-induced mutual
/// information over rank-1 projective measurements on the measured qubit,
/// searched on a (theta, phi) grid of angular_resolution x 2 angular_resolution
/// followed by golden-section refinement. The measured qubit is the second
/// tensor factor, the one the closed forms above condition on.
double discord_numeric(const TwoQubitState& state, int angular_resolution);

}  // namespace cqed
