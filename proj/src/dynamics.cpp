#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cqed {

namespace {

constexpr Complex kI{0.0, 1.0};

// 4V^2 - (lambda_c/2)^2, i.e. (2 Omega)^2.
double discriminant(const ModelParams& params) {
    const double v = params.coupling;
    const double half_decay = 0.5 * params.cavity_decay;
    return 4.0 * v * v - half_decay * half_decay;
}

bool in_exceptional_window(const ModelParams& params) {
    const double v = params.coupling;
    return std::abs(discriminant(params)) <= kExceptionalPointEps * 4.0 * v * v;
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("time must be finite and non-negative, got " + std::to_string(t));
    }
}

}  // namespace

void validate(const ModelParams& params) {
    if (!(params.coupling > 0.0) || !std::isfinite(params.coupling)) {
        throw std::invalid_argument("coupling must be positive");
    }
    if (!(params.cavity_decay >= 0.0) || !std::isfinite(params.cavity_decay)) {
        throw std::invalid_argument("cavity_decay must be non-negative");
    }
    const double norm = std::norm(params.amp_a) + std::norm(params.amp_b);
    if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("|a|^2 + |b|^2 must equal 1, got " + std::to_string(norm));
    }
}

ModelParams normalized(ModelParams params) {
    const double norm = std::sqrt(std::norm(params.amp_a) + std::norm(params.amp_b));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("amplitudes a and b cannot both vanish");
    }
    params.amp_a /= norm;
    params.amp_b /= norm;
    return params;
}

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::Coherent: return "coherent";
        case Regime::ExceptionalPoint: return "exceptional-point";
        case Regime::Incoherent: return "incoherent";
    }
    return "?";
}

Complex rabi_frequency(const ModelParams& params) {
    // std::sqrt of (-x, +0) lands on the positive imaginary axis.
    return 0.5 * std::sqrt(Complex(discriminant(params), 0.0));
}

Regime classify_regime(const ModelParams& params) {
    if (in_exceptional_window(params)) return Regime::ExceptionalPoint;
    return discriminant(params) > 0.0 ? Regime::Coherent : Regime::Incoherent;
}

Amplitudes amplitudes_analytic(const ModelParams& params, double t) {
    require_time(t);
    const double v = params.coupling;
    const double quarter_decay = 0.25 * params.cavity_decay;

    // damped_cos = e^{-lambda t/4} cos(Omega t), damped_sinc = e^{-lambda t/4} sin(Omega t)/Omega.
    double damped_cos = 0.0;
    double damped_sinc = 0.0;
    if (in_exceptional_window(params)) {
        // Series in Omega^2 t^2; exact at the exceptional point itself.
        const double w = 0.25 * discriminant(params) * t * t;
        const double decay = std::exp(-quarter_decay * t);
        damped_cos = decay * (1.0 - w / 2.0 + w * w / 24.0);
        damped_sinc = decay * t * (1.0 - w / 6.0 + w * w / 120.0);
    } else {
        // Eigen-exponentials s = -lambda/4 +- i Omega. In the incoherent regime both
        // exponents are real and negative, so nothing overflows for large t.
        const Complex omega = rabi_frequency(params);
        const Complex e_plus = std::exp((-quarter_decay + kI * omega) * t);
        const Complex e_minus = std::exp((-quarter_decay - kI * omega) * t);
        damped_cos = (0.5 * (e_plus + e_minus)).real();
        damped_sinc = ((e_plus - e_minus) / (2.0 * kI * omega)).real();
    }

    Amplitudes out;
    out.xi = Complex(damped_cos + quarter_decay * damped_sinc, 0.0);
    out.eta = Complex(0.0, -v * damped_sinc);
    out.chi_sq = std::max(0.0, 1.0 - std::norm(out.xi) - std::norm(out.eta));
    return out;
}

ExcitationProbabilities excitation_probabilities(const ModelParams& params, double t) {
    const Amplitudes amp = amplitudes_analytic(params, t);
    ExcitationProbabilities out;
    out.p = std::clamp(1.0 - std::norm(amp.xi), 0.0, 1.0);
    out.q = std::clamp(std::norm(amp.eta), 0.0, out.p);
    out.gamma_d = out.p - out.q;
    return out;
}

void rk4_step(const ModelParams& params, Complex& xi, Complex& eta, double h) {
    const double v = params.coupling;
    const double half_decay = 0.5 * params.cavity_decay;
    auto dxi = [&](Complex e) { return -kI * v * e; };
    auto deta = [&](Complex x, Complex e) { return -kI * v * x - half_decay * e; };

    const Complex k1x = dxi(eta);
    const Complex k1e = deta(xi, eta);
    const Complex k2x = dxi(eta + 0.5 * h * k1e);
    const Complex k2e = deta(xi + 0.5 * h * k1x, eta + 0.5 * h * k1e);
    const Complex k3x = dxi(eta + 0.5 * h * k2e);
    const Complex k3e = deta(xi + 0.5 * h * k2x, eta + 0.5 * h * k2e);
    const Complex k4x = dxi(eta + h * k3e);
    const Complex k4e = deta(xi + h * k3x, eta + h * k3e);
    xi += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    eta += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
}

Amplitudes amplitudes_ode(const ModelParams& params, double t, double tol) {
    require_time(t);
    if (!(tol > 0.0) || tol > 1e-3) {
        throw std::invalid_argument("ODE tolerance must lie in (0, 1e-3]");
    }

    auto integrate = [&](long steps) {
        Amplitudes amp;
        if (steps == 0) return amp;
        const double h = t / static_cast<double>(steps);
        for (long i = 0; i < steps; ++i) rk4_step(params, amp.xi, amp.eta, h);
        return amp;
    };

    if (t == 0.0) return Amplitudes{};

    constexpr int kMaxHalvings = 18;
    long steps = std::max(1L, static_cast<long>(std::ceil(t / 0.05)));
    Amplitudes coarse = integrate(steps);
    for (int halving = 0; halving < kMaxHalvings; ++halving) {
        steps *= 2;
        Amplitudes fine = integrate(steps);
        const double change = std::max(std::abs(fine.xi - coarse.xi), std::abs(fine.eta - coarse.eta));
        if (change <= tol) {
            fine.chi_sq = std::max(0.0, 1.0 - std::norm(fine.xi) - std::norm(fine.eta));
            return fine;
        }
        coarse = fine;
    }
    throw OdeFailure("RK4 step halving did not reach tolerance " + std::to_string(tol));
}

}  // namespace cqed
