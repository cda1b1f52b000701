#pragma once

// Density-matrix functionals on two-qubit states. Entropies are in bits.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "cqed/states.hpp"

namespace cqed {

/// Eigenvalues below this are treated as exact zeros inside entropies.
inline constexpr double kEntropyZero = 1e-15;

struct NotPsdError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Uhlmann fidelity {Tr sqrt(sqrt(r1) r2 sqrt(r1))}^2. Throws NotPsdError when
/// either input has an eigenvalue below -1e-10.
double fidelity(const Matrix4c& rho1, const Matrix4c& rho2);
double fidelity(const TwoQubitState& rho1, const TwoQubitState& rho2);

/// Closed-form fidelities between the initial state and the state at time t,
/// one per partition that admits one.
enum class FidelityIndex { F1, F2, F3, F4, F5, F6 };

inline constexpr FidelityIndex kAllFidelityIndices[] = {
    FidelityIndex::F1, FidelityIndex::F2, FidelityIndex::F3,
    FidelityIndex::F4, FidelityIndex::F5, FidelityIndex::F6,
};

Partition partition_of(FidelityIndex index);
std::optional<FidelityIndex> fidelity_index_of(Partition partition);

double fidelity_closed_form(FidelityIndex index, const ModelParams& params, double t);

/// Half the trace norm of rho1 - rho2.
double trace_distance(const Matrix4c& rho1, const Matrix4c& rho2);
double trace_distance(const TwoQubitState& rho1, const TwoQubitState& rho2);

/// -sum l log2 l over the eigenvalues of a Hermitian matrix of any size.
template <typename Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
    using Plain = typename Derived::PlainObject;
    const Plain sym = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Plain> eig(sym, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double l = eig.eigenvalues()(i);
        if (l > kEntropyZero) s -= l * std::log2(l);
    }
    return s;
}

inline double von_neumann_entropy(const TwoQubitState& state) { return von_neumann_entropy(state.matrix()); }

/// +infinity when the support of rho is not contained in the support of sigma.
inline constexpr double kInfiniteRelativeEntropy = std::numeric_limits<double>::infinity();

/// Tr[rho (log2 rho - log2 sigma)], evaluated on the support of sigma (eigenvalues
/// above support_tol). Returns kInfiniteRelativeEntropy when rho carries weight
/// above support_tol outside that support.
double relative_entropy(const Matrix4c& rho, const Matrix4c& sigma, double support_tol = 1e-12);
double relative_entropy(const TwoQubitState& rho, const TwoQubitState& sigma, double support_tol = 1e-12);

/// H(x) = -x log2 x - (1-x) log2(1-x). Accepts x in [-1e-12, 1 + 1e-12].
double binary_entropy(double x);

/// Reduced state of the first (keep_first = true) or second tensor factor.
Matrix2c partial_trace(const Matrix4c& rho, bool keep_first);

}  // namespace cqed
