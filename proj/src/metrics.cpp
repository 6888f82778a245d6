#include "swarmclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace swarmclust {

double sicd(const Matrix& centroids, const Assignment& assignment, const Matrix& points) {
    if (assignment.cluster_of.size() != points.rows()) throw ContractError("sicd: assignment length != N");
    if (assignment.k != centroids.rows()) throw ContractError("sicd: assignment k != centroid count");
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        total += std::sqrt(squared_euclidean(centroids.row(assignment.cluster_of[i]), points.row(i)));
    }
    return total;
}

std::vector<std::vector<std::size_t>> confusion_matrix(const Assignment& assignment, std::span<const int> labels,
                                                       std::size_t classes) {
    if (labels.size() != assignment.cluster_of.size()) {
        throw ContractError("confusion_matrix: label count != assignment length");
    }
    std::vector<std::vector<std::size_t>> table(assignment.k, std::vector<std::size_t>(classes, 0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
            throw ContractError("confusion_matrix: label out of range");
        }
        if (assignment.cluster_of[i] >= assignment.k) throw ContractError("confusion_matrix: cluster out of range");
        ++table[assignment.cluster_of[i]][static_cast<std::size_t>(labels[i])];
    }
    return table;
}

std::vector<int> max_weight_matching(const std::vector<std::vector<double>>& weight) {
    const std::size_t rows = weight.size();
    const std::size_t cols = rows ? weight.front().size() : 0;
    const std::size_t n = std::max(rows, cols);
    if (n == 0) return {};

    // Kuhn-Munkres with potentials on the padded square cost matrix -w.
    auto cost = [&](std::size_t r, std::size_t c) {
        return (r < rows && c < cols) ? -weight[r][c] : 0.0;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assigned(rows, -1);
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t r = match[j] - 1;
        if (r < rows && j - 1 < cols) assigned[r] = static_cast<int>(j - 1);
    }
    return assigned;
}

ErrorRate error_rate(const Assignment& assignment, std::span<const int> labels, MappingMode mode) {
    if (labels.empty() && !assignment.cluster_of.empty()) {
        throw UnsupportedEvaluationError("error_rate: dataset has no labels");
    }
    if (labels.size() != assignment.cluster_of.size()) throw ContractError("error_rate: label count != N");
    const std::size_t n = labels.size();
    std::size_t classes = 0;
    for (int l : labels) classes = std::max(classes, static_cast<std::size_t>(l) + 1);

    ErrorRate out;
    out.confusion = confusion_matrix(assignment, labels, classes);
    out.mapping.assign(assignment.k, -1);

    if (mode == MappingMode::optimal) {
        std::vector<std::vector<double>> weight(assignment.k, std::vector<double>(classes));
        for (std::size_t c = 0; c < assignment.k; ++c) {
            for (std::size_t l = 0; l < classes; ++l) weight[c][l] = static_cast<double>(out.confusion[c][l]);
        }
        out.mapping = max_weight_matching(weight);
    } else {
        for (std::size_t c = 0; c < assignment.k; ++c) {
            const auto& row = out.confusion[c];
            const auto best = std::max_element(row.begin(), row.end());  // first max = lowest class id
            if (best != row.end() && *best > 0) out.mapping[c] = static_cast<int>(best - row.begin());
        }
    }

    std::size_t matched = 0;
    for (std::size_t c = 0; c < assignment.k; ++c) {
        if (out.mapping[c] >= 0) matched += out.confusion[c][static_cast<std::size_t>(out.mapping[c])];
    }
    out.misplaced = n - matched;
    out.percent = n == 0 ? 0.0 : static_cast<double>(out.misplaced) / static_cast<double>(n) * 100.0;
    return out;
}

std::size_t convergence_stats(std::span<const double> trace, double rel_tol, std::size_t stall_iters) {
    const std::size_t len = trace.size();
    if (stall_iters == 0) return 0;
    auto stalled_at = [&](std::size_t j) {
        const double before = trace[j - 1];
        const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
        return (before - trace[j]) / scale < rel_tol;
    };
    std::size_t run = 0;
    for (std::size_t j = 1; j < len; ++j) {
        run = stalled_at(j) ? run + 1 : 0;
        if (run == stall_iters) return j - stall_iters;
    }
    return len;
}

EvaluationReport evaluate(const Dataset& dataset, const Matrix& centroids, const Assignment& assignment,
                          std::span<const double> trace, double rel_tol, std::size_t stall_iters, MappingMode mode) {
    EvaluationReport report;
    report.sicd = sicd(centroids, assignment, dataset.points());
    if (dataset.labels()) report.error = error_rate(assignment, *dataset.labels(), mode);
    report.iterations_to_converge = convergence_stats(trace, rel_tol, stall_iters);
    return report;
}

}  // namespace swarmclust
