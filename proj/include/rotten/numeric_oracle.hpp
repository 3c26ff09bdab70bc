#pragma once

/**
 * Derivative-free numerical search for three-pulse rotors.
 *
 * Minimizes J = d(U(+f*), V)^2 + d(U(-f*), V)^2 over the pulse angles, where
 * d is distance_up_to_phase and V the ideal target rotation. The search
 * samples the angle box with a seeded generator, keeps the best points as
 * starts and refines each with Nelder-Mead. It is independent of the
 * closed-form synthesis and is used to cross-check it at the propagator
 * level.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "rotten/errors.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"

namespace rotten {

enum class Parameterization {
    symmetric,  ///< theta1, theta2, phi1, phi2 with pulse 3 = pulse 1
    general,    ///< theta1, phi1, theta2, phi2, theta3, phi3
};

struct OptimizationProblem {
    TargetRotation target;
    double f_star = 0.0;
    Parameterization parameterization = Parameterization::symmetric;

    [[nodiscard]] std::size_t dimension() const {
        return parameterization == Parameterization::symmetric ? 4 : 6;
    }
};

struct SolverConfig {
    int restarts = 32;
    /// Random points drawn from the angle box before refinement.
    int coarse_samples = 2048;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double initial_step = 0.25;
    /// J below this counts as an exact rotor.
    double convergence_threshold = 1e-9;
    /// Refinement of a start stops once J reaches this value.
    double polish_target = 1e-28;
    /// Simplex diameter at which a start is re-seeded or abandoned.
    double simplex_tolerance = 1e-13;
    unsigned threads = 1;
};

struct OptimizationResult {
    std::vector<double> params;
    double objective_value = 0.0;
    /// Objective evaluations spent across all starts.
    std::int64_t iterations = 0;
    bool converged = false;
    int best_restart = -1;
};

/// Pulses encoded by a parameter vector, in time order.
inline std::array<Pulse, 3> pulses_from_params(const OptimizationProblem& problem, std::span<const double> p) {
    if (p.size() != problem.dimension()) throw DomainError("parameter vector has the wrong length");
    if (problem.parameterization == Parameterization::symmetric) {
        const Pulse outer{p[0], p[2]};
        return {outer, Pulse{p[1], p[3]}, outer};
    }
    return {Pulse{p[0], p[1]}, Pulse{p[2], p[3]}, Pulse{p[4], p[5]}};
}

inline double objective(const OptimizationProblem& problem, std::span<const double> params) {
    const auto pulses = pulses_from_params(problem, params);
    const Rotation ideal = ideal_propagator(problem.target);
    const double dp = distance_up_to_phase(pulses_propagator(pulses, OffResonance{problem.f_star}), ideal);
    const double dm = distance_up_to_phase(pulses_propagator(pulses, OffResonance{-problem.f_star}), ideal);
    return dp * dp + dm * dm;
}

namespace detail {

struct SimplexOutcome {
    std::vector<double> point;
    double value = 0.0;
    std::int64_t evaluations = 0;
};

/// Nelder-Mead from `start`; re-seeds the simplex around the incumbent when
/// it collapses, until the evaluation budget or the target value is reached.
inline SimplexOutcome nelder_mead(const std::function<double(std::span<const double>)>& fn,
                                  std::vector<double> start, std::int64_t budget, const SolverConfig& cfg) {
    const std::size_t n = start.size();
    SimplexOutcome out;
    auto eval = [&](const std::vector<double>& x) {
        ++out.evaluations;
        return fn(x);
    };

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    double step = cfg.initial_step;

    auto seed_simplex = [&](const std::vector<double>& centre, double value) {
        simplex[0] = centre;
        values[0] = value;
        for (std::size_t i = 0; i < n; ++i) {
            simplex[i + 1] = centre;
            simplex[i + 1][i] += step;
            values[i + 1] = eval(simplex[i + 1]);
        }
    };
    seed_simplex(start, eval(start));

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto along = [&](double t, std::vector<double>& dst) {
        const auto& worst = simplex[order[n]];
        for (std::size_t i = 0; i < n; ++i) dst[i] = centroid[i] + t * (worst[i] - centroid[i]);
    };

    while (out.evaluations < budget) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        const std::size_t best = order[0];
        if (values[best] <= cfg.polish_target) break;

        double diameter = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                diameter = std::max(diameter, std::abs(simplex[order[k]][i] - simplex[best][i]));
        if (diameter < cfg.simplex_tolerance) {
            // Collapsed; restart a smaller simplex around the incumbent.
            step *= 0.1;
            if (step < cfg.simplex_tolerance) break;
            const auto centre = simplex[best];
            seed_simplex(centre, values[best]);
            continue;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i] / static_cast<double>(n);

        const std::size_t worst = order[n];
        const double second_worst = values[order[n - 1]];

        along(-cfg.reflection, trial);
        const double reflected = eval(trial);
        if (reflected < values[best]) {
            along(-cfg.reflection * cfg.expansion, trial2);
            const double expanded = eval(trial2);
            if (expanded < reflected) {
                simplex[worst] = trial2;
                values[worst] = expanded;
            } else {
                simplex[worst] = trial;
                values[worst] = reflected;
            }
            continue;
        }
        if (reflected < second_worst) {
            simplex[worst] = trial;
            values[worst] = reflected;
            continue;
        }
        const bool outside = reflected < values[worst];
        along(outside ? -cfg.reflection * cfg.contraction : cfg.contraction, trial2);
        const double contracted = eval(trial2);
        if (contracted < std::min(reflected, values[worst])) {
            simplex[worst] = trial2;
            values[worst] = contracted;
            continue;
        }
        for (std::size_t k = 1; k <= n; ++k) {
            auto& v = simplex[order[k]];
            for (std::size_t i = 0; i < n; ++i) v[i] = simplex[best][i] + cfg.shrink * (v[i] - simplex[best][i]);
            values[order[k]] = eval(v);
        }
    }

    const auto it = std::min_element(values.begin(), values.end());
    out.point = simplex[static_cast<std::size_t>(it - values.begin())];
    out.value = *it;
    return out;
}

}  // namespace detail

/// Deterministic for a given (problem, seed, budget, config), independent of
/// config.threads. Throws DomainError when budget < 1000.
inline OptimizationResult solve(const OptimizationProblem& problem, std::uint64_t seed, std::int64_t budget,
                                const SolverConfig& cfg = {}) {
    if (budget < 1000) throw DomainError("numeric solver budget must be at least 1000 evaluations");
    if (cfg.restarts < 1 || cfg.coarse_samples < cfg.restarts)
        throw DomainError("solver needs at least one restart and as many coarse samples as restarts");

    const std::size_t dim = problem.dimension();
    auto fn = [&problem](std::span<const double> x) { return objective(problem, x); };

    // Coarse sampling: nutation angles in [0, 2pi], phases in [0, 2pi).
    const std::int64_t coarse = std::min<std::int64_t>(cfg.coarse_samples, budget / 2);
    std::mt19937_64 rng{seed};
    std::uniform_real_distribution<double> angle{0.0, 2.0 * std::numbers::pi};
    struct Candidate {
        std::vector<double> x;
        double value;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(coarse));
    for (std::int64_t i = 0; i < coarse; ++i) {
        std::vector<double> x(dim);
        for (double& v : x) v = angle(rng);
        const double value = fn(x);
        candidates.push_back({std::move(x), value});
    }
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(cfg.restarts), candidates.size());
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

    const std::int64_t per_start = std::max<std::int64_t>(1, (budget - coarse) / static_cast<std::int64_t>(starts));
    std::vector<detail::SimplexOutcome> outcomes(starts);
    auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < starts; k += stride)
            outcomes[k] = detail::nelder_mead(fn, candidates[k].x, per_start, cfg);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(starts)));
    if (workers == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run_range, t, workers);
    }

    OptimizationResult result;
    result.iterations = coarse;
    for (std::size_t k = 0; k < starts; ++k) {
        result.iterations += outcomes[k].evaluations;
        if (result.best_restart < 0 || outcomes[k].value < result.objective_value) {
            result.best_restart = static_cast<int>(k);
            result.objective_value = outcomes[k].value;
            result.params = outcomes[k].point;
        }
    }
    result.converged = result.objective_value < cfg.convergence_threshold;
    return result;
}

}  // namespace rotten
