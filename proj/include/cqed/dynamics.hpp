#pragma once

// Single-subsystem excitation dynamics of a resonant atom coupled to a leaky
// cavity mode. The cavity leaks into a reservoir sink at rate cavity_decay;
// the atom itself does not decay.

#include <complex>
#include <stdexcept>

namespace cqed {

using Complex = std::complex<double>;

/// Physical knobs shared by every computation. Units: hbar = coupling = 1 by
/// convention, times in units of the inverse lossless Rabi frequency.
struct ModelParams {
    double coupling = 1.0;      // V
    double cavity_decay = 0.0;  // lambda_c
    Complex amp_a{0.7071067811865476, 0.0};
    Complex amp_b{0.7071067811865476, 0.0};
};

/// Throws std::invalid_argument when coupling <= 0, cavity_decay < 0 or the
/// amplitudes are not normalized to 1e-12.
void validate(const ModelParams& params);

/// Returns params with (amp_a, amp_b) rescaled to unit norm.
ModelParams normalized(ModelParams params);

struct ExcitationProbabilities {
    double p = 0.0;        // 1 - atom population
    double q = 0.0;        // cavity population
    double gamma_d = 0.0;  // reservoir population, p - q
};

struct Amplitudes {
    Complex xi{1.0, 0.0};   // atom
    Complex eta{0.0, 0.0};  // cavity
    double chi_sq = 0.0;    // reservoir, 1 - |xi|^2 - |eta|^2 (clamped at 0)
};

enum class Regime { Coherent, ExceptionalPoint, Incoherent };

const char* to_string(Regime regime);

/// Relative width of the exceptional-point window on 4V^2 - (lambda_c/2)^2.
inline constexpr double kExceptionalPointEps = 1e-10;

/// Omega with 2 Omega = sqrt(4V^2 - (lambda_c/2)^2). Purely imaginary with a
/// positive imaginary part in the incoherent regime.
Complex rabi_frequency(const ModelParams& params);

Regime classify_regime(const ModelParams& params);

/// Closed-form amplitudes from the initial condition xi = 1, eta = 0.
Amplitudes amplitudes_analytic(const ModelParams& params, double t);

/// Closed-form (p, q, gamma_d), clamped so that 0 <= q <= p <= 1.
ExcitationProbabilities excitation_probabilities(const ModelParams& params, double t);

struct OdeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One classic RK4 step of d(xi)/dt = -iV eta, d(eta)/dt = -iV xi - (lambda_c/2) eta.
void rk4_step(const ModelParams& params, Complex& xi, Complex& eta, double h);

/// Numerical oracle for amplitudes_analytic: fixed-step RK4 with repeated step
/// halving until two successive resolutions agree within tol. Throws
/// OdeFailure if that does not happen within the halving budget.
Amplitudes amplitudes_ode(const ModelParams& params, double t, double tol);

}  // namespace cqed
