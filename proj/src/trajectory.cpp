#include "cqed/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace cqed {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// The no-jump flow sampled on a time grid that lands exactly on every checkpoint.
struct NoJumpFlow {
    std::vector<double> times;
    std::vector<double> norms;            // running minimum of |xi|^2 + |eta|^2
    std::vector<std::size_t> checkpoint_node;
    std::vector<double> atom_fraction;    // |xi|^2 / norm at each checkpoint
    std::vector<double> cavity_fraction;  // |eta|^2 / norm at each checkpoint
};

NoJumpFlow integrate_flow(const TrajectoryConfig& config, double dt) {
    NoJumpFlow flow;
    Complex xi{1.0, 0.0};
    Complex eta{0.0, 0.0};
    double previous = 0.0;
    flow.times.push_back(0.0);
    flow.norms.push_back(1.0);

    auto record_checkpoint = [&] {
        const double norm = std::norm(xi) + std::norm(eta);
        flow.checkpoint_node.push_back(flow.times.size() - 1);
        flow.atom_fraction.push_back(std::norm(xi) / norm);
        flow.cavity_fraction.push_back(std::norm(eta) / norm);
    };

    for (double checkpoint : config.checkpoints) {
        const double span = checkpoint - previous;
        if (span > 0.0) {
            const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
            const double h = span / static_cast<double>(steps);
            for (long i = 0; i < steps; ++i) {
                rk4_step(config.params, xi, eta, h);
                flow.times.push_back(i + 1 == steps ? checkpoint : previous + (i + 1) * h);
                flow.norms.push_back(std::min(flow.norms.back(), std::norm(xi) + std::norm(eta)));
            }
        }
        record_checkpoint();
        previous = checkpoint;
    }
    return flow;
}

// Jump time of a trajectory with threshold u, by linear interpolation of the
// squared norm between grid nodes; +infinity if it survives the whole grid.
double jump_time(const NoJumpFlow& flow, double u) {
    // norms is non-increasing; find the first node strictly below u.
    const auto it = std::upper_bound(flow.norms.begin(), flow.norms.end(), u,
                                     [](double threshold, double norm) { return norm < threshold; });
    if (it == flow.norms.end()) return std::numeric_limits<double>::infinity();
    const std::size_t k = static_cast<std::size_t>(it - flow.norms.begin());
    if (k == 0) return 0.0;
    const double n0 = flow.norms[k - 1];
    const double n1 = flow.norms[k];
    const double frac = n0 > n1 ? (n0 - u) / (n0 - n1) : 1.0;
    return flow.times[k - 1] + frac * (flow.times[k] - flow.times[k - 1]);
}

// Number of trajectories that have jumped by each checkpoint.
std::vector<std::uint64_t> count_jumps(const TrajectoryConfig& config, const NoJumpFlow& flow) {
    const std::size_t n_check = config.checkpoints.size();
    const bool lossless = config.params.cavity_decay == 0.0;

    auto histogram_range = [&](std::uint64_t begin, std::uint64_t end) {
        // first_jumped[c] counts trajectories whose first checkpoint at or after the jump is c.
        std::vector<std::uint64_t> first_jumped(n_check + 1, 0);
        for (std::uint64_t i = begin; i < end; ++i) {
            if (lossless) {
                ++first_jumped[n_check];
                continue;
            }
            const double when = jump_time(flow, trajectory_uniform(config.seed, i));
            const auto c = std::lower_bound(config.checkpoints.begin(), config.checkpoints.end(), when) -
                           config.checkpoints.begin();
            ++first_jumped[static_cast<std::size_t>(c)];
        }
        return first_jumped;
    };

    const unsigned workers = std::max(1u, config.workers);
    std::vector<std::vector<std::uint64_t>> partial(workers);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (config.n_traj + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = std::min<std::uint64_t>(config.n_traj, w * chunk);
            const std::uint64_t end = std::min<std::uint64_t>(config.n_traj, begin + chunk);
            pool.emplace_back([&, w, begin, end] { partial[w] = histogram_range(begin, end); });
        }
    }

    std::vector<std::uint64_t> jumped(n_check, 0);
    std::uint64_t running = 0;
    for (std::size_t c = 0; c < n_check; ++c) {
        for (const auto& h : partial) running += h[c];
        jumped[c] = running;
    }
    return jumped;
}

TrajectoryEstimate estimate(const TrajectoryConfig& config, double dt) {
    const NoJumpFlow flow = integrate_flow(config, dt);
    const std::vector<std::uint64_t> jumped = count_jumps(config, flow);
    const double n = static_cast<double>(config.n_traj);

    TrajectoryEstimate out;
    for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
        const double jump_frac = static_cast<double>(jumped[c]) / n;
        const double survive_frac = static_cast<double>(config.n_traj - jumped[c]) / n;
        const double binomial = std::sqrt(survive_frac * jump_frac / n);

        CheckpointEstimate e;
        e.t = config.checkpoints[c];
        e.est_atom = survive_frac * flow.atom_fraction[c];
        e.est_cavity = survive_frac * flow.cavity_fraction[c];
        e.est_reservoir = jump_frac;
        e.se_atom = flow.atom_fraction[c] * binomial;
        e.se_cavity = flow.cavity_fraction[c] * binomial;
        e.se_reservoir = binomial;
        out.checkpoints.push_back(e);
    }
    return out;
}

}  // namespace

void validate(const TrajectoryConfig& config) {
    validate(config.params);
    if (config.n_traj < 1) throw std::invalid_argument("n_traj must be at least 1");
    if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (config.checkpoints.empty()) throw std::invalid_argument("at least one checkpoint is required");
    if (!(config.checkpoints.front() >= 0.0)) throw std::invalid_argument("checkpoints must be non-negative");
    for (std::size_t i = 1; i < config.checkpoints.size(); ++i) {
        if (!(config.checkpoints[i] > config.checkpoints[i - 1])) {
            throw std::invalid_argument("checkpoints must be strictly increasing");
        }
    }
}

double trajectory_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

TrajectoryEstimate simulate(const TrajectoryConfig& config) {
    validate(config);
    TrajectoryEstimate result = estimate(config, config.dt);

    if (config.n_traj >= 10000) {
        const TrajectoryEstimate halved = estimate(config, 0.5 * config.dt);
        auto moved = [](double a, double b, double se) { return std::abs(a - b) > std::max(se, 1e-9); };
        for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
            const CheckpointEstimate& x = result.checkpoints[c];
            const CheckpointEstimate& y = halved.checkpoints[c];
            if (moved(x.est_atom, y.est_atom, x.se_atom) || moved(x.est_cavity, y.est_cavity, x.se_cavity) ||
                moved(x.est_reservoir, y.est_reservoir, x.se_reservoir)) {
                throw ConvergenceError("halving dt = " + std::to_string(config.dt) +
                                       " moved the estimate at t = " + std::to_string(x.t) +
                                       " by more than one standard error");
            }
        }
    }
    return result;
}

}  // namespace cqed
