#include "swarmclust/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "swarmclust/metrics.hpp"

namespace swarmclust {

std::string_view algorithm_id(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::pso: return "pso";
        case Algorithm::kmeans_pso: return "kmeans_pso";
        case Algorithm::sub_pso: return "sub_pso";
        case Algorithm::brapso: return "brapso";
        case Algorithm::sc_br_apso: return "sc_br_apso";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view id) {
    for (auto a : all_algorithms) {
        if (algorithm_id(a) == id) return a;
    }
    return std::nullopt;
}

std::string_view algorithm_description(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kmeans: return "Lloyd K-Means, random data points as initial centers";
        case Algorithm::pso: return "plain PSO: random init, linear inertia, no boundary handling";
        case Algorithm::kmeans_pso: return "K-Means result seeds one particle of a plain PSO";
        case Algorithm::sub_pso: return "subtractive clustering seeds a plain PSO";
        case Algorithm::brapso: return "boundary restricted adaptive PSO: exponential inertia, boundary restriction";
        case Algorithm::sc_br_apso: return "subtractive clustering seeds BRAPSO";
    }
    return "";
}

Assignment assign_nearest(const Matrix& points, const Matrix& centroids) {
    if (centroids.rows() == 0) throw ContractError("assign_nearest: need at least one centroid");
    if (centroids.cols() != points.cols()) throw ContractError("assign_nearest: dimension mismatch");
    Assignment a{std::vector<std::size_t>(points.rows(), 0), centroids.rows()};
    for (std::size_t i = 0; i < points.rows(); ++i) {
        double best = squared_euclidean(points.row(i), centroids.row(0));
        for (std::size_t c = 1; c < centroids.rows(); ++c) {
            const double d = squared_euclidean(points.row(i), centroids.row(c));
            if (d < best) {
                best = d;
                a.cluster_of[i] = c;
            }
        }
    }
    return a;
}

namespace {

Matrix cluster_means(const Matrix& points, const Assignment& assignment, const Matrix* fallback) {
    const std::size_t d = points.cols();
    Matrix sums(assignment.k, d);
    std::vector<std::size_t> counts(assignment.k, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto c = assignment.cluster_of[i];
        ++counts[c];
        auto dst = sums.row(c);
        auto src = points.row(i);
        for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    }
    for (std::size_t c = 0; c < assignment.k; ++c) {
        auto row = sums.row(c);
        if (counts[c] == 0) {
            if (fallback) std::copy(fallback->row(c).begin(), fallback->row(c).end(), row.begin());
            continue;
        }
        for (auto& v : row) v /= static_cast<double>(counts[c]);
    }
    return sums;
}

void validate_assignment(const Matrix& points, const Assignment& assignment) {
    if (assignment.cluster_of.size() != points.rows()) throw ContractError("assignment length != N");
    if (assignment.k == 0) throw ContractError("assignment k must be >= 1");
    for (auto c : assignment.cluster_of) {
        if (c >= assignment.k) throw ContractError("assignment entry out of range");
    }
}

}  // namespace

Recomputed recompute_centroids(const Matrix& points, const Assignment& assignment, const Matrix& reference) {
    validate_assignment(points, assignment);
    if (reference.rows() != assignment.k || reference.cols() != points.cols()) {
        throw ContractError("recompute_centroids: reference must be k x d");
    }
    Recomputed out{Matrix{}, assignment};
    auto counts = assignment.cluster_sizes();
    std::vector<bool> moved(points.rows(), false);

    for (std::size_t empty = 0; empty < assignment.k; ++empty) {
        if (counts[empty] != 0) continue;
        std::size_t donor = points.rows();
        double farthest = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            const auto c = out.assignment.cluster_of[i];
            if (moved[i] || counts[c] < 2) continue;
            const double d = squared_euclidean(points.row(i), reference.row(c));
            if (d > farthest) {
                farthest = d;
                donor = i;
            }
        }
        if (donor == points.rows()) continue;  // only when k > N
        --counts[out.assignment.cluster_of[donor]];
        out.assignment.cluster_of[donor] = empty;
        counts[empty] = 1;
        moved[donor] = true;
    }
    out.centroids = cluster_means(points, out.assignment, &reference);
    return out;
}

Recomputed recompute_centroids(const Matrix& points, const Assignment& assignment) {
    validate_assignment(points, assignment);
    // Rows of empty clusters are never read as a reference.
    const Matrix means = cluster_means(points, assignment, nullptr);
    return recompute_centroids(points, assignment, means);
}

double clustering_fitness(const Matrix& points, std::size_t k, std::span<const double> position) {
    const std::size_t d = points.cols();
    if (position.size() != k * d || k == 0) throw ContractError("clustering_fitness: position length != k*d");
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto x = points.row(i);
        double best = squared_euclidean(x, position.subspan(0, d));
        for (std::size_t c = 1; c < k; ++c) best = std::min(best, squared_euclidean(x, position.subspan(c * d, d)));
        total += std::sqrt(best);
    }
    return total;
}

PsoConfig default_pso_config(Algorithm algorithm) {
    PsoConfig cfg;
    cfg.c1 = 2.0;
    cfg.c2 = 2.0;
    cfg.max_iter = 200;
    cfg.swarm_size = 20;
    cfg.convergence = {25, 1e-8};
    switch (algorithm) {
        case Algorithm::brapso:
        case Algorithm::sc_br_apso:
            cfg.inertia = {InertiaKind::exponential_normalized, 0.9, 0.4};
            cfg.boundary = BoundaryMode::restricted;
            break;
        default:
            cfg.inertia = {InertiaKind::linear, 0.9, 0.4};
            cfg.boundary = BoundaryMode::none;
            break;
    }
    return cfg;
}

SubtractiveConfig default_subtractive_config() {
    SubtractiveConfig cfg;
    cfg.r_a = 0.5;
    cfg.stop_rule = DensityRatio{0.15};
    cfg.max_centers = 64;
    return cfg;
}

namespace {

void check_k(const Dataset& dataset, std::size_t k) {
    if (k < 1 || k > dataset.size()) {
        throw DegenerateInputError("k = " + std::to_string(k) + " must lie in [1, " + std::to_string(dataset.size()) +
                                   "] for dataset '" + dataset.name() + "'");
    }
}

ClusteringOutcome finish(const Dataset& dataset, Matrix centroids, std::vector<double> trace, std::size_t iterations,
                         std::uint64_t seed) {
    ClusteringOutcome out;
    out.assignment = assign_nearest(dataset.points(), centroids);
    out.sicd = sicd(centroids, out.assignment, dataset.points());
    out.k = centroids.rows();
    out.centroids = std::move(centroids);
    out.sicd_trace = std::move(trace);
    out.iterations_used = iterations;
    out.seed = seed;
    return out;
}

// Centroid recalculation on gbest: assign points to the gbest centroids and
// recalculate the centers. The result replaces gbest (and its owner's pbest)
// only when it lowers the fitness.
void refine_gbest(Swarm& swarm, const Matrix& points, std::size_t k, const FitnessFn& fitness) {
    const Matrix current = decode(swarm.gbest_position, k, points.cols());
    const auto assignment = assign_nearest(points, current);
    auto refined = encode(recompute_centroids(points, assignment, current).centroids);
    const double f = fitness(refined);
    if (f < swarm.gbest_fitness) {
        auto& owner = swarm.particles[swarm.gbest_owner];
        owner.pbest_position = refined;
        owner.pbest_fitness = f;
        swarm.gbest_position = std::move(refined);
        swarm.gbest_fitness = f;
    }
}

ClusteringOutcome run_swarm_pipeline(const Dataset& dataset, std::size_t k, const std::optional<Matrix>& seeds,
                                     const PsoConfig& config, bool refine, std::uint64_t seed,
                                     const SwarmObserver& observer) {
    config.validate();
    check_k(dataset, k);
    const Matrix& points = dataset.points();
    const FitnessFn fitness = [&points, k](std::span<const double> p) { return clustering_fitness(points, k, p); };

    Rng init_rng(split_seed(seed, streams::swarm_init));
    Rng motion_rng(split_seed(seed, streams::swarm_motion));
    Swarm swarm = init_swarm(seeds, k, bounds_of(dataset), config, fitness, init_rng);
    if (refine) refine_gbest(swarm, points, k, fitness);
    if (observer) observer(swarm);

    const StepHook hook = [&](Swarm& s) {
        if (refine) refine_gbest(s, points, k, fitness);
        if (observer) observer(s);
    };
    auto run = run_swarm(swarm, fitness, config, motion_rng, hook);
    return finish(dataset, decode(swarm.gbest_position, k, points.cols()), std::move(run.gbest_trace),
                  run.iterations, seed);
}

}  // namespace

ClusteringOutcome run_kmeans(const Dataset& dataset, std::size_t k, const KMeansInit& init, std::uint64_t seed,
                             std::size_t max_iter) {
    check_k(dataset, k);
    const Matrix& points = dataset.points();
    Matrix centroids;
    if (const auto* given = std::get_if<Matrix>(&init)) {
        if (given->rows() != k || given->cols() != points.cols()) {
            throw ContractError("run_kmeans: given centers must be k x d");
        }
        centroids = *given;
    } else {
        Rng rng(split_seed(seed, streams::kmeans_init));
        std::vector<std::size_t> order(points.rows());
        std::iota(order.begin(), order.end(), 0);
        centroids = Matrix(k, points.cols());
        for (std::size_t c = 0; c < k; ++c) {
            const std::size_t pick = c + rng.below(order.size() - c);
            std::swap(order[c], order[pick]);
            auto src = points.row(order[c]);
            std::copy(src.begin(), src.end(), centroids.row(c).begin());
        }
    }

    Assignment assignment = assign_nearest(points, centroids);
    double cost = sicd(centroids, assignment, points);
    std::vector<double> trace{cost};
    std::size_t iterations = 0;
    while (iterations < max_iter) {
        auto next = recompute_centroids(points, assignment, centroids);
        auto next_assignment = assign_nearest(points, next.centroids);
        const double next_cost = sicd(next.centroids, next_assignment, points);
        ++iterations;
        // Means minimise squared, not plain, distances; a mean update can
        // raise SICD. Such a step is rejected and the run ends.
        if (next_cost > cost) break;
        const bool stable = next_assignment == assignment;
        centroids = std::move(next.centroids);
        assignment = std::move(next_assignment);
        cost = next_cost;
        trace.push_back(cost);
        if (stable) break;
    }
    return finish(dataset, std::move(centroids), std::move(trace), iterations, seed);
}

ClusteringOutcome run_pso(const Dataset& dataset, std::size_t k, const PsoConfig& config, std::uint64_t seed,
                          const SwarmObserver& observer) {
    return run_swarm_pipeline(dataset, k, std::nullopt, config, false, seed, observer);
}

ClusteringOutcome run_kmeans_pso(const Dataset& dataset, std::size_t k, const PsoConfig& config, std::uint64_t seed,
                                 const SwarmObserver& observer) {
    const auto km = run_kmeans(dataset, k, RandomPoints{}, seed);
    return run_swarm_pipeline(dataset, k, km.centroids, config, false, seed, observer);
}

ClusteringOutcome run_subtractive_pso(const Dataset& dataset, const SubtractiveConfig& sub_config,
                                      const PsoConfig& config, std::uint64_t seed, const SwarmObserver& observer) {
    const auto seeding = select_centers(dataset, sub_config);
    return run_swarm_pipeline(dataset, seeding.k, seeding.centers, config, false, seed, observer);
}

ClusteringOutcome run_brapso(const Dataset& dataset, std::size_t k, const PsoConfig& config, std::uint64_t seed,
                             const SwarmObserver& observer) {
    return run_swarm_pipeline(dataset, k, std::nullopt, config, true, seed, observer);
}

ClusteringOutcome run_sc_br_apso(const Dataset& dataset, const SubtractiveConfig& sub_config,
                                 const PsoConfig& config, std::uint64_t seed, const SwarmObserver& observer) {
    const auto seeding = select_centers(dataset, sub_config);
    return run_swarm_pipeline(dataset, seeding.k, seeding.centers, config, true, seed, observer);
}

ClusteringOutcome run_algorithm(Algorithm algorithm, const Dataset& dataset, const AlgorithmParams& params,
                                std::uint64_t seed, const SwarmObserver& observer) {
    const PsoConfig pso = params.pso.value_or(default_pso_config(algorithm));
    auto need_k = [&]() {
        if (!params.k) {
            throw ContractError(std::string(algorithm_id(algorithm)) + " needs a cluster count k");
        }
        return *params.k;
    };
    switch (algorithm) {
        case Algorithm::kmeans: return run_kmeans(dataset, need_k(), RandomPoints{}, seed, params.kmeans_max_iter);
        case Algorithm::pso: return run_pso(dataset, need_k(), pso, seed, observer);
        case Algorithm::kmeans_pso: return run_kmeans_pso(dataset, need_k(), pso, seed, observer);
        case Algorithm::sub_pso: return run_subtractive_pso(dataset, params.subtractive, pso, seed, observer);
        case Algorithm::brapso: return run_brapso(dataset, need_k(), pso, seed, observer);
        case Algorithm::sc_br_apso: return run_sc_br_apso(dataset, params.subtractive, pso, seed, observer);
    }
    throw ContractError("unknown algorithm");
}

}  // namespace swarmclust
