#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "swarmclust/core.hpp"

namespace swarmclust {

// Particle swarm engine. A particle encodes k centroids of dimension d,
// flattened row-major into one k*d vector. Lower fitness is better.

enum class InertiaKind {
    linear,                 // w_max - (w_max - w_min) * iter / max_iter
    exponential_literal,    // w_max * exp(-iter)
    exponential_normalized  // w_max * exp(-iter / max_iter)
};

struct InertiaSchedule {
    InertiaKind kind = InertiaKind::exponential_normalized;
    double w_max = 0.9;
    double w_min = 0.4;  // linear only
};

enum class BoundaryMode { restricted, none };

struct ConvergenceRule {
    std::size_t stall_iters = 25;
    double rel_tol = 1e-8;
};

struct PsoConfig {
    double c1 = 2.0;
    double c2 = 2.0;
    InertiaSchedule inertia;
    std::size_t max_iter = 200;
    std::size_t swarm_size = 20;
    BoundaryMode boundary = BoundaryMode::restricted;
    std::optional<double> v_max_fraction;
    ConvergenceRule convergence;

    void validate() const;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> pbest_position;
    double pbest_fitness = 0.0;
};

struct Swarm {
    std::vector<Particle> particles;
    std::vector<double> gbest_position;
    double gbest_fitness = 0.0;
    std::size_t gbest_owner = 0;  // particle whose pbest is the gbest
    std::size_t iter = 0;         // completed steps
    SearchBounds bounds;          // tiled to k*d
};

using FitnessFn = std::function<double(std::span<const double>)>;

std::vector<double> encode(const Matrix& centroids);
Matrix decode(std::span<const double> position, std::size_t k, std::size_t d);

double inertia_weight(const PsoConfig& config, std::size_t iter);

// v = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x) per component. Draw order:
// for each component j, r1 then r2.
// With v_max_fraction set, component j is clamped to
// +-v_max_fraction * (upper_j - lower_j).
std::vector<double> update_velocity(const Particle& p, std::span<const double> gbest, double w,
                                    const PsoConfig& config, const SearchBounds& bounds, UnitSource& rng);

std::vector<double> update_position(const Particle& p);

// Reverts each out-of-bounds component to position - velocity. A component
// that is still outside afterwards is clamped to the nearer bound.
std::vector<double> restrict_boundary(std::span<const double> position, std::span<const double> velocity,
                                      const SearchBounds& bounds);

// Builds a swarm of config.swarm_size particles in `bounds` (d-dimensional).
// With seeds, particle 0 sits exactly on them and the others get a uniform
// jitter of up to 5% of each dimension's range, clipped to the bounds.
// Without seeds positions are uniform inside the bounds. Velocities start at
// zero and pbest is the initial position.
Swarm init_swarm(const std::optional<Matrix>& seeds, std::size_t k, const SearchBounds& bounds,
                 const PsoConfig& config, const FitnessFn& fitness, UnitSource& rng);

// Refreshes gbest from the particles' pbest values (strict improvement,
// lowest index wins ties).
void refresh_gbest(Swarm& swarm);

// One synchronous iteration: move every particle, then evaluate, then update
// pbest and finally gbest. Throws FitnessError on NaN fitness.
void step(Swarm& swarm, const FitnessFn& fitness, const PsoConfig& config, UnitSource& rng);

struct FitnessError : Error {
    using Error::Error;
};

struct SwarmRun {
    std::vector<double> gbest_trace;  // entry 0 is the initial gbest
    std::size_t iterations = 0;
};

// Called after every step; may modify the swarm's gbest (see pipelines).
using StepHook = std::function<void(Swarm&)>;

// Steps until max_iter, or until gbest improves by less than rel_tol
// (relative) for stall_iters consecutive steps.
SwarmRun run_swarm(Swarm& swarm, const FitnessFn& fitness, const PsoConfig& config, UnitSource& rng,
                   const StepHook& after_step = {});

}  // namespace swarmclust
