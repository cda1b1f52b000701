#pragma once

// Monte-Carlo quantum-jump unraveling of the single-subsystem master equation.
//
// In the single-excitation manifold the no-jump evolution is the deterministic
// non-Hermitian flow of (xi, eta); the only jump channel (cavity decay, rate
// lambda_c |eta|^2) sends a trajectory to the absorbing reservoir state. A
// trajectory draws u in (0, 1] and jumps when the squared norm of the no-jump
// state first falls below u.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cqed/dynamics.hpp"

namespace cqed {

struct TrajectoryConfig {
    ModelParams params;
    std::vector<double> checkpoints;  // strictly increasing, non-negative
    std::uint64_t n_traj = 1000;
    std::uint64_t seed = 0;
    double dt = 1e-3;
    unsigned workers = 1;
};

void validate(const TrajectoryConfig& config);

struct CheckpointEstimate {
    double t = 0.0;
    double est_atom = 0.0;       // estimate of 1 - p
    double est_cavity = 0.0;     // estimate of q
    double est_reservoir = 0.0;  // estimate of gamma_d
    double se_atom = 0.0;
    double se_cavity = 0.0;
    double se_reservoir = 0.0;
};

struct TrajectoryEstimate {
    std::vector<CheckpointEstimate> checkpoints;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform draw in (0, 1] for trajectory `index`; depends only on (seed, index).
double trajectory_uniform(std::uint64_t seed, std::uint64_t index);

/// Ensemble estimates at every checkpoint. Deterministic in the seed and
/// independent of the worker count. For n_traj >= 1e4 the run is repeated with
/// dt/2 and a ConvergenceError is thrown if any estimate moves by more than one
/// standard error.
TrajectoryEstimate simulate(const TrajectoryConfig& config);

}  // namespace cqed
