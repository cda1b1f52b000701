#include "cqed/measures.hpp"

#include <algorithm>
#include <string>

namespace cqed {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<Matrix4c>;

Matrix4c hermitian_part(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

void require_psd(const Solver& eig, const char* which) {
    const double lowest = eig.eigenvalues().minCoeff();
    if (lowest < -kPsdTol) {
        throw NotPsdError(std::string(which) + " has eigenvalue " + std::to_string(lowest));
    }
}

// Eigenvalues below this are rounding noise of a zero eigenvalue. They must be
// dropped before taking square roots, which would amplify 1e-17 to 3e-9.
constexpr double kEigenNoise = 1e-14;

Eigen::Vector4d noise_free_roots(const Eigen::Vector4d& eigenvalues) {
    return eigenvalues.unaryExpr([](double l) { return l > kEigenNoise ? std::sqrt(l) : 0.0; });
}

Matrix4c psd_sqrt(const Solver& eig) {
    const Eigen::Vector4d roots = noise_free_roots(eig.eigenvalues());
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const Matrix4c& rho1, const Matrix4c& rho2) {
    const Solver eig1(hermitian_part(rho1));
    require_psd(eig1, "first state");
    const Solver eig2(hermitian_part(rho2), Eigen::EigenvaluesOnly);
    require_psd(eig2, "second state");

    const Matrix4c root = psd_sqrt(eig1);
    const Solver inner(hermitian_part(root * rho2 * root), Eigen::EigenvaluesOnly);
    const double overlap = noise_free_roots(inner.eigenvalues()).sum();
    return std::clamp(overlap * overlap, 0.0, 1.0);
}

double fidelity(const TwoQubitState& rho1, const TwoQubitState& rho2) {
    return fidelity(rho1.matrix(), rho2.matrix());
}

Partition partition_of(FidelityIndex index) {
    switch (index) {
        case FidelityIndex::F1: return Partition::AtomAtom;
        case FidelityIndex::F2: return Partition::CavityCavity;
        case FidelityIndex::F3: return Partition::ReservoirReservoir;
        case FidelityIndex::F4: return Partition::AtomCavityIntra;
        case FidelityIndex::F5: return Partition::AtomReservoirIntra;
        case FidelityIndex::F6: return Partition::CavityReservoirIntra;
    }
    throw std::invalid_argument("unhandled fidelity index");
}

std::optional<FidelityIndex> fidelity_index_of(Partition partition) {
    for (FidelityIndex index : kAllFidelityIndices) {
        if (partition_of(index) == partition) return index;
    }
    return std::nullopt;
}

double fidelity_closed_form(FidelityIndex index, const ModelParams& params, double t) {
    const ExcitationProbabilities probs = excitation_probabilities(params, t);
    const double a2 = std::norm(params.amp_a);
    const double b2 = std::norm(params.amp_b);
    const double survive = 1.0 - probs.p;

    double value = 0.0;
    switch (index) {
        case FidelityIndex::F1: value = survive; break;
        case FidelityIndex::F2: value = 1.0 - probs.q; break;
        case FidelityIndex::F3: value = 1.0 - probs.gamma_d; break;
        case FidelityIndex::F4: {
            const double s = std::sqrt(a2 * a2 * survive) + std::sqrt(b2 * b2 + a2 * b2 * probs.gamma_d);
            value = s * s;
            break;
        }
        case FidelityIndex::F5: {
            const double s = std::sqrt(a2 * a2 * survive) + std::sqrt(b2 * b2 + a2 * b2 * probs.q);
            value = s * s;
            break;
        }
        case FidelityIndex::F6: value = b2 + a2 * survive; break;
    }
    return std::clamp(value, 0.0, 1.0);
}

double trace_distance(const Matrix4c& rho1, const Matrix4c& rho2) {
    const Solver eig(hermitian_part(rho1 - rho2), Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const TwoQubitState& rho1, const TwoQubitState& rho2) {
    return trace_distance(rho1.matrix(), rho2.matrix());
}

double relative_entropy(const Matrix4c& rho, const Matrix4c& sigma, double support_tol) {
    const Solver eig_sigma(hermitian_part(sigma));
    const Matrix4c rho_h = hermitian_part(rho);

    double cross = 0.0;  // Tr[rho log2 sigma] on the support of sigma
    for (int j = 0; j < 4; ++j) {
        const auto v = eig_sigma.eigenvectors().col(j);
        const double weight = (v.adjoint() * rho_h * v)(0, 0).real();
        const double lambda = eig_sigma.eigenvalues()(j);
        if (lambda <= support_tol) {
            if (weight > support_tol) return kInfiniteRelativeEntropy;
            continue;
        }
        cross += weight * std::log2(lambda);
    }
    const double value = -von_neumann_entropy(rho_h) - cross;
    return std::max(0.0, value);
}

double relative_entropy(const TwoQubitState& rho, const TwoQubitState& sigma, double support_tol) {
    return relative_entropy(rho.matrix(), sigma.matrix(), support_tol);
}

double binary_entropy(double x) {
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
        throw std::invalid_argument("binary_entropy argument outside [0, 1]: " + std::to_string(x));
    }
    x = std::clamp(x, 0.0, 1.0);
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

Matrix2c partial_trace(const Matrix4c& rho, bool keep_first) {
    Matrix2c out = Matrix2c::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                out(i, j) += keep_first ? rho(2 * i + k, 2 * j + k) : rho(2 * k + i, 2 * k + j);
            }
        }
    }
    return out;
}

}  // namespace cqed
