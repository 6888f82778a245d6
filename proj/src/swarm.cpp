#include "swarmclust/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace swarmclust {

void PsoConfig::validate() const {
    if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw ContractError("pso: acceleration coefficients must be >= 0");
    if (!(inertia.w_max >= 0.0)) throw ContractError("pso: w_max must be >= 0");
    if (inertia.kind == InertiaKind::linear && !(inertia.w_min >= 0.0 && inertia.w_min <= inertia.w_max)) {
        throw ContractError("pso: linear inertia needs 0 <= w_min <= w_max");
    }
    if (max_iter < 1) throw ContractError("pso: max_iter must be >= 1");
    if (swarm_size < 2) throw ContractError("pso: swarm_size must be >= 2");
    if (v_max_fraction && !(*v_max_fraction > 0.0 && *v_max_fraction <= 1.0)) {
        throw ContractError("pso: v_max_fraction must lie in (0, 1]");
    }
    if (!(convergence.rel_tol >= 0.0)) throw ContractError("pso: rel_tol must be >= 0");
}

std::vector<double> encode(const Matrix& centroids) { return centroids.values(); }

Matrix decode(std::span<const double> position, std::size_t k, std::size_t d) {
    if (position.size() != k * d) {
        throw ContractError("decode: position length " + std::to_string(position.size()) + " != k*d = " +
                            std::to_string(k * d));
    }
    return Matrix(k, d, std::vector<double>(position.begin(), position.end()));
}

double inertia_weight(const PsoConfig& config, std::size_t iter) {
    const auto& s = config.inertia;
    const double t = static_cast<double>(std::min(iter, config.max_iter));
    switch (s.kind) {
        case InertiaKind::linear:
            return s.w_max - (s.w_max - s.w_min) * t / static_cast<double>(config.max_iter);
        case InertiaKind::exponential_literal:
            return s.w_max * std::exp(-t);
        case InertiaKind::exponential_normalized:
            return s.w_max * std::exp(-t / static_cast<double>(config.max_iter));
    }
    return s.w_max;
}

std::vector<double> update_velocity(const Particle& p, std::span<const double> gbest, double w,
                                    const PsoConfig& config, const SearchBounds& bounds, UnitSource& rng) {
    const std::size_t n = p.position.size();
    if (p.velocity.size() != n || p.pbest_position.size() != n || gbest.size() != n) {
        throw ContractError("update_velocity: vector lengths differ");
    }
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        v[j] = w * p.velocity[j] + config.c1 * r1 * (p.pbest_position[j] - p.position[j]) +
               config.c2 * r2 * (gbest[j] - p.position[j]);
        if (config.v_max_fraction) {
            const double limit = *config.v_max_fraction * (bounds.upper[j] - bounds.lower[j]);
            v[j] = std::clamp(v[j], -limit, limit);
        }
    }
    return v;
}

std::vector<double> update_position(const Particle& p) {
    if (p.velocity.size() != p.position.size()) throw ContractError("update_position: vector lengths differ");
    std::vector<double> x(p.position.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = p.position[j] + p.velocity[j];
    return x;
}

std::vector<double> restrict_boundary(std::span<const double> position, std::span<const double> velocity,
                                      const SearchBounds& bounds) {
    if (position.size() != velocity.size() || position.size() != bounds.dims()) {
        throw ContractError("restrict_boundary: vector lengths differ");
    }
    std::vector<double> x(position.begin(), position.end());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] <= bounds.upper[j] && x[j] >= bounds.lower[j]) continue;
        x[j] -= velocity[j];
        // Reachable from an out-of-bounds start, or by rounding in the
        // subtraction when the previous value sat on the bound.
        x[j] = std::clamp(x[j], bounds.lower[j], bounds.upper[j]);
    }
    return x;
}

namespace {

double checked_fitness(const FitnessFn& fitness, std::span<const double> position) {
    const double f = fitness(position);
    if (std::isnan(f)) throw FitnessError("fitness function returned NaN");
    return f;
}

}  // namespace

void refresh_gbest(Swarm& swarm) {
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        const auto& p = swarm.particles[i];
        if (p.pbest_fitness < swarm.gbest_fitness) {
            swarm.gbest_fitness = p.pbest_fitness;
            swarm.gbest_position = p.pbest_position;
            swarm.gbest_owner = i;
        }
    }
}

Swarm init_swarm(const std::optional<Matrix>& seeds, std::size_t k, const SearchBounds& bounds,
                 const PsoConfig& config, const FitnessFn& fitness, UnitSource& rng) {
    const std::size_t d = bounds.dims();
    if (k * d == 0) throw ContractError("init_swarm: k*d must be positive");
    if (config.swarm_size < 1) throw ContractError("init_swarm: swarm_size must be >= 1");
    if (seeds && (seeds->rows() != k || seeds->cols() != d)) {
        throw ContractError("init_swarm: seed matrix must be k x d");
    }

    Swarm swarm;
    swarm.bounds = bounds.tiled(k);
    const auto& lo = swarm.bounds.lower;
    const auto& hi = swarm.bounds.upper;
    const std::size_t n = k * d;

    swarm.particles.resize(config.swarm_size);
    for (std::size_t i = 0; i < config.swarm_size; ++i) {
        auto& p = swarm.particles[i];
        p.position.resize(n);
        if (seeds) {
            const auto base = encode(*seeds);
            for (std::size_t j = 0; j < n; ++j) {
                if (i == 0) {
                    p.position[j] = base[j];
                } else {
                    const double jitter = 0.05 * (hi[j] - lo[j]) * (2.0 * rng.uniform01() - 1.0);
                    p.position[j] = std::clamp(base[j] + jitter, lo[j], hi[j]);
                }
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) p.position[j] = lo[j] + (hi[j] - lo[j]) * rng.uniform01();
        }
        p.velocity.assign(n, 0.0);
        p.pbest_position = p.position;
        p.pbest_fitness = checked_fitness(fitness, p.position);
    }

    swarm.gbest_fitness = std::numeric_limits<double>::infinity();
    refresh_gbest(swarm);
    if (swarm.gbest_position.empty()) {
        // Every particle scored +inf.
        swarm.gbest_owner = 0;
        swarm.gbest_position = swarm.particles[0].pbest_position;
        swarm.gbest_fitness = swarm.particles[0].pbest_fitness;
    }
    return swarm;
}

void step(Swarm& swarm, const FitnessFn& fitness, const PsoConfig& config, UnitSource& rng) {
    const double w = inertia_weight(config, swarm.iter);
    for (auto& p : swarm.particles) {
        p.velocity = update_velocity(p, swarm.gbest_position, w, config, swarm.bounds, rng);
        auto moved = update_position(p);
        if (config.boundary == BoundaryMode::restricted) {
            moved = restrict_boundary(moved, p.velocity, swarm.bounds);
        }
        p.position = std::move(moved);
    }

    std::vector<double> scores(swarm.particles.size());
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = checked_fitness(fitness, swarm.particles[i].position);

    for (std::size_t i = 0; i < scores.size(); ++i) {
        auto& p = swarm.particles[i];
        if (scores[i] < p.pbest_fitness) {
            p.pbest_fitness = scores[i];
            p.pbest_position = p.position;
        }
    }
    refresh_gbest(swarm);
    ++swarm.iter;
}

SwarmRun run_swarm(Swarm& swarm, const FitnessFn& fitness, const PsoConfig& config, UnitSource& rng,
                   const StepHook& after_step) {
    SwarmRun run;
    run.gbest_trace.push_back(swarm.gbest_fitness);
    std::size_t stalled = 0;
    while (swarm.iter < config.max_iter) {
        const double before = swarm.gbest_fitness;
        step(swarm, fitness, config, rng);
        if (after_step) after_step(swarm);
        ++run.iterations;
        const double after = swarm.gbest_fitness;
        run.gbest_trace.push_back(after);

        const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
        const double improvement = (before - after) / scale;
        stalled = improvement < config.convergence.rel_tol ? stalled + 1 : 0;
        if (config.convergence.stall_iters > 0 && stalled >= config.convergence.stall_iters) break;
    }
    return run;
}

}  // namespace swarmclust
