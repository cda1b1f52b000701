#include "cqed/states.hpp"

#include <cmath>
#include <stdexcept>

namespace cqed {

std::string_view to_string(Partition partition) {
    switch (partition) {
        case Partition::AtomAtom: return "atom-atom";
        case Partition::CavityCavity: return "cavity-cavity";
        case Partition::ReservoirReservoir: return "reservoir-reservoir";
        case Partition::AtomCavityIntra: return "atom-cavity";
        case Partition::AtomReservoirIntra: return "atom-reservoir";
        case Partition::CavityReservoirIntra: return "cavity-reservoir";
        case Partition::AtomReservoirCross: return "atom-reservoir-cross";
    }
    return "?";
}

Partition parse_partition(std::string_view name) {
    for (Partition p : kAllPartitions) {
        if (to_string(p) == name) return p;
    }
    throw std::invalid_argument("unknown partition '" + std::string(name) + "'");
}

bool is_equivalent_pair(Partition partition) {
    return partition == Partition::AtomAtom || partition == Partition::CavityCavity ||
           partition == Partition::ReservoirReservoir;
}

TwoQubitState TwoQubitState::x_form(double u11, double u22, double u33, Complex u23,
                                    std::optional<Partition> partition) {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = u11;
    m(1, 1) = u22;
    m(2, 2) = u33;
    m(1, 2) = u23;
    m(2, 1) = std::conj(u23);
    return TwoQubitState(m, partition);
}

TwoQubitState reduced_state(Partition partition, const ModelParams& params, double t) {
    return reduced_state(partition, params, excitation_probabilities(params, t));
}

TwoQubitState reduced_state(Partition partition, const ModelParams& params,
                            const ExcitationProbabilities& probs) {
    const Complex a = params.amp_a;
    const Complex b = params.amp_b;
    const double a2 = std::norm(a);
    const double b2 = std::norm(b);
    const double survive = 1.0 - probs.p;  // atom population
    const double q = probs.q;
    const double gd = probs.gamma_d;

    // The equivalent pairs share one form; only the single-excitation weight differs.
    auto equivalent = [&](double weight) {
        return TwoQubitState::x_form(1.0 - weight, b2 * weight, a2 * weight, std::conj(a) * b * weight,
                                     partition);
    };

    switch (partition) {
        case Partition::AtomAtom: return equivalent(survive);
        case Partition::CavityCavity: return equivalent(q);
        case Partition::ReservoirReservoir: return equivalent(gd);
        case Partition::AtomCavityIntra:
            return TwoQubitState::x_form(a2 * gd + b2, a2 * q, a2 * survive,
                                         a2 * std::sqrt(survive) * std::sqrt(q), partition);
        case Partition::AtomReservoirIntra:
            return TwoQubitState::x_form(a2 * q + b2, a2 * gd, a2 * survive,
                                         a2 * std::sqrt(survive) * std::sqrt(gd), partition);
        case Partition::CavityReservoirIntra:
            return TwoQubitState::x_form(a2 * survive + b2, a2 * gd, a2 * q,
                                         a2 * std::sqrt(q) * std::sqrt(gd), partition);
        case Partition::AtomReservoirCross:
            return TwoQubitState::x_form(a2 * (q + gd) + b2 * (1.0 - gd), b2 * gd, a2 * survive,
                                         std::conj(a) * b * std::sqrt(gd * survive), partition);
    }
    throw std::invalid_argument("unhandled partition");
}

std::string_view to_string(StateViolation violation) {
    switch (violation) {
        case StateViolation::NonHermitian: return "non-hermitian";
        case StateViolation::Trace: return "trace";
        case StateViolation::NotPsd: return "not-psd";
        case StateViolation::NotXForm: return "not-x-form";
    }
    return "?";
}

std::vector<StateViolation> validate_state(const TwoQubitState& state) {
    const Matrix4c& m = state.matrix();
    std::vector<StateViolation> out;

    const bool hermitian = (m - m.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol;
    if (!hermitian) out.push_back(StateViolation::NonHermitian);

    if (std::abs(m.trace() - Complex(1.0, 0.0)) > kTraceTol) out.push_back(StateViolation::Trace);

    const Matrix4c sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTol) out.push_back(StateViolation::NotPsd);

    bool x_form = std::abs(m(3, 3)) <= kXFormTol;
    for (int i = 0; i < 4 && x_form; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j || (i == 1 && j == 2) || (i == 2 && j == 1)) continue;
            if (std::abs(m(i, j)) > kXFormTol) {
                x_form = false;
                break;
            }
        }
    }
    if (!x_form) out.push_back(StateViolation::NotXForm);
    return out;
}

}  // namespace cqed
