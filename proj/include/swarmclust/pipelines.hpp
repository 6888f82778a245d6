#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "swarmclust/core.hpp"
#include "swarmclust/subtractive.hpp"
#include "swarmclust/swarm.hpp"

namespace swarmclust {

enum class Algorithm { kmeans, pso, kmeans_pso, sub_pso, brapso, sc_br_apso };

inline constexpr std::array<Algorithm, 6> all_algorithms{Algorithm::kmeans,  Algorithm::pso,
                                                        Algorithm::kmeans_pso, Algorithm::sub_pso,
                                                        Algorithm::brapso,  Algorithm::sc_br_apso};

std::string_view algorithm_id(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view id);
std::string_view algorithm_description(Algorithm algorithm);

struct ClusteringOutcome {
    Matrix centroids;
    Assignment assignment;
    double sicd = 0.0;
    std::size_t k = 0;
    std::size_t iterations_used = 0;
    // PSO family: gbest fitness, entry 0 after initialisation and one entry
    // per step. K-Means: SICD after each accepted Lloyd iteration.
    std::vector<double> sicd_trace;
    std::uint64_t seed = 0;
};

// Nearest centroid for every point; ties go to the lowest centroid index.
Assignment assign_nearest(const Matrix& points, const Matrix& centroids);

struct Recomputed {
    Matrix centroids;
    Assignment assignment;  // differs from the input only where an empty cluster was repaired
};

// Cluster means. An empty cluster takes over the point lying farthest from
// the `reference` centroid of its own cluster (donor clusters must keep at
// least one member; ties go to the lowest point index) and that point moves
// into it.
Recomputed recompute_centroids(const Matrix& points, const Assignment& assignment, const Matrix& reference);
// As above with the fresh cluster means as the reference.
Recomputed recompute_centroids(const Matrix& points, const Assignment& assignment);

// SICD of the nearest-centroid partition for a flattened k x d position.
// Matches sicd(decode(p), assign_nearest(points, decode(p)), points) exactly.
double clustering_fitness(const Matrix& points, std::size_t k, std::span<const double> position);

struct RandomPoints {};
using KMeansInit = std::variant<RandomPoints, Matrix>;

// Frozen per-algorithm configuration. Versioned: bump when any value changes.
inline constexpr int defaults_version = 1;
PsoConfig default_pso_config(Algorithm algorithm);
SubtractiveConfig default_subtractive_config();
inline constexpr std::size_t default_kmeans_max_iter = 100;

using SwarmObserver = std::function<void(const Swarm&)>;

// Lloyd iterations. An iteration that would raise SICD is rejected and the
// run stops at the previous state, so the SICD trace never increases.
ClusteringOutcome run_kmeans(const Dataset& dataset, std::size_t k, const KMeansInit& init, std::uint64_t seed,
                             std::size_t max_iter = default_kmeans_max_iter);

ClusteringOutcome run_pso(const Dataset& dataset, std::size_t k, const PsoConfig& config, std::uint64_t seed,
                          const SwarmObserver& observer = {});

ClusteringOutcome run_kmeans_pso(const Dataset& dataset, std::size_t k, const PsoConfig& config, std::uint64_t seed,
                                 const SwarmObserver& observer = {});

ClusteringOutcome run_subtractive_pso(const Dataset& dataset, const SubtractiveConfig& sub_config,
                                      const PsoConfig& config, std::uint64_t seed,
                                      const SwarmObserver& observer = {});

// Random initialisation, boundary restriction, exponential inertia, and the
// per-iteration centroid recalculation applied to gbest.
ClusteringOutcome run_brapso(const Dataset& dataset, std::size_t k, const PsoConfig& config, std::uint64_t seed,
                             const SwarmObserver& observer = {});

// Subtractive seeding picks k and the starting centers, then the BRAPSO loop
// refines them.
ClusteringOutcome run_sc_br_apso(const Dataset& dataset, const SubtractiveConfig& sub_config,
                                 const PsoConfig& config, std::uint64_t seed, const SwarmObserver& observer = {});

struct AlgorithmParams {
    std::optional<std::size_t> k;  // required by kmeans, pso, kmeans_pso, brapso
    SubtractiveConfig subtractive = default_subtractive_config();
    std::optional<PsoConfig> pso;  // defaults to default_pso_config(algorithm)
    std::size_t kmeans_max_iter = default_kmeans_max_iter;
};

// Uniform entry point used by the benchmark harness.
ClusteringOutcome run_algorithm(Algorithm algorithm, const Dataset& dataset, const AlgorithmParams& params,
                                std::uint64_t seed, const SwarmObserver& observer = {});

}  // namespace swarmclust
