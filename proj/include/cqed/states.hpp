#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cqed/dynamics.hpp"

namespace cqed {

using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;

/// Two-qubit partitions of the pair of atom-cavity-reservoir subsystems.
/// "Intra" partitions live inside one subsystem; AtomReservoirCross pairs
/// atom 1 with reservoir 2.
enum class Partition {
    AtomAtom,
    CavityCavity,
    ReservoirReservoir,
    AtomCavityIntra,
    AtomReservoirIntra,
    CavityReservoirIntra,
    AtomReservoirCross,
};

inline constexpr Partition kAllPartitions[] = {
    Partition::AtomAtom,           Partition::CavityCavity,       Partition::ReservoirReservoir,
    Partition::AtomCavityIntra,    Partition::AtomReservoirIntra, Partition::CavityReservoirIntra,
    Partition::AtomReservoirCross,
};

std::string_view to_string(Partition partition);
/// Accepts the kebab-case names produced by to_string ("atom-atom", ...).
Partition parse_partition(std::string_view name);

/// True for the three partitions related to each other by substituting the
/// atom population 1-p with q or gamma_d.
bool is_equivalent_pair(Partition partition);

/// 4x4 density matrix in the basis |00>, |01>, |10>, |11>. States built by
/// reduced_state are X-form with a single coherence u23 and u44 = 0.
class TwoQubitState {
public:
    TwoQubitState() = default;
    explicit TwoQubitState(Matrix4c matrix, std::optional<Partition> partition = std::nullopt)
        : matrix_(std::move(matrix)), partition_(partition) {}

    /// X-form state with the given populations and coherence; u44 = 0.
    static TwoQubitState x_form(double u11, double u22, double u33, Complex u23,
                                std::optional<Partition> partition = std::nullopt);

    const Matrix4c& matrix() const { return matrix_; }
    std::optional<Partition> partition() const { return partition_; }

    double u11() const { return matrix_(0, 0).real(); }
    double u22() const { return matrix_(1, 1).real(); }
    double u33() const { return matrix_(2, 2).real(); }
    double u44() const { return matrix_(3, 3).real(); }
    Complex u23() const { return matrix_(1, 2); }

private:
    Matrix4c matrix_ = Matrix4c::Zero();
    std::optional<Partition> partition_;
};

/// Reduced state of the partition at time t for the initial atomic state
/// a|10> + b|01> with cavities and reservoirs in vacuum.
TwoQubitState reduced_state(Partition partition, const ModelParams& params, double t);
TwoQubitState reduced_state(Partition partition, const ModelParams& params,
                            const ExcitationProbabilities& probs);

enum class StateViolation { NonHermitian, Trace, NotPsd, NotXForm };

std::string_view to_string(StateViolation violation);

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kXFormTol = 1e-12;

/// Empty iff Hermitian, unit trace, PSD and X-form (with u44 = 0) all hold.
std::vector<StateViolation> validate_state(const TwoQubitState& state);

}  // namespace cqed
