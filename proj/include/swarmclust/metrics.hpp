#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "swarmclust/core.hpp"

namespace swarmclust {

// Sum of intra-cluster distances: sum over points of the unsquared Euclidean
// distance to the centroid of the cluster the point is assigned to.
double sicd(const Matrix& centroids, const Assignment& assignment, const Matrix& points);

enum class MappingMode { optimal, majority };

struct ErrorRate {
    double percent = 0.0;
    // mapping[c] is the class cluster c is mapped to, or -1 when the cluster
    // is left unmatched (all its points count as misplaced).
    std::vector<int> mapping;
    // confusion[c][l]: points in cluster c with class l.
    std::vector<std::vector<std::size_t>> confusion;
    std::size_t misplaced = 0;
};

std::vector<std::vector<std::size_t>> confusion_matrix(const Assignment& assignment, std::span<const int> labels,
                                                       std::size_t classes);

// Misplaced points as a percentage of N. `optimal` is the best one-to-one
// cluster-to-class matching (Hungarian method on the rectangular confusion
// matrix); `majority` maps each cluster to its plurality class, ties to the
// lower class id.
ErrorRate error_rate(const Assignment& assignment, std::span<const int> labels, MappingMode mode = MappingMode::optimal);

// Maximum-weight one-to-one matching of rows to columns. Returns, for every
// row, the matched column or -1. Rows or columns may outnumber the other side.
std::vector<int> max_weight_matching(const std::vector<std::vector<double>>& weight);

// Index of the first trace entry after which the relative improvement stays
// below rel_tol for stall_iters consecutive steps; trace.size() when that
// never happens.
std::size_t convergence_stats(std::span<const double> trace, double rel_tol, std::size_t stall_iters);

struct EvaluationReport {
    double sicd = 0.0;
    std::optional<ErrorRate> error;  // present when the dataset is labelled
    std::size_t iterations_to_converge = 0;
};

EvaluationReport evaluate(const Dataset& dataset, const Matrix& centroids, const Assignment& assignment,
                          std::span<const double> trace, double rel_tol, std::size_t stall_iters,
                          MappingMode mode = MappingMode::optimal);

}  // namespace swarmclust
