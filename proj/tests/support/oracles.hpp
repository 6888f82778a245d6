#pragma once

// Straight-line reference implementations used as test oracles. They share no
// code with the library: plain nested vectors, explicit loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "swarmclust/core.hpp"

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

inline Points to_points(const swarmclust::Matrix& m) {
    Points p(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) p[i][j] = m(i, j);
    return p;
}

// Density of every point with radius r_a.
inline std::vector<double> density(const Points& x, double r_a) {
    std::vector<double> d(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) d[i] += std::exp(-dist2(x[i], x[j]) / ((r_a / 2) * (r_a / 2)));
    return d;
}

inline std::vector<double> revise(std::vector<double> d, const Points& x, std::size_t c, double r_b) {
    const double dc = d[c];
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = d[i] - dc * std::exp(-dist2(x[i], x[c]) / ((r_b / 2) * (r_b / 2)));
    d[c] = 0.0;
    return d;
}

struct Seeding {
    std::vector<std::size_t> indices;
    std::vector<double> peaks;
};

// Replays the greedy density peak selection. k_fixed == 0 selects the
// density-ratio rule with `epsilon`.
inline Seeding select(const Points& x, double r_a, double r_b, std::size_t k_fixed, double epsilon,
                      std::size_t max_centers) {
    Seeding s;
    std::vector<double> d = density(x, r_a);
    std::vector<bool> taken(x.size(), false);
    const std::size_t limit = k_fixed ? k_fixed : std::min(max_centers, x.size());
    double first = 0.0;
    while (s.indices.size() < limit) {
        // Enumerate every candidate explicitly.
        std::size_t best = x.size();
        double best_d = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!taken[i] && d[i] > best_d) {
                best_d = d[i];
                best = i;
            }
        }
        if (s.indices.empty()) first = best_d;
        else if (!k_fixed && best_d < epsilon * first) break;
        taken[best] = true;
        s.indices.push_back(best);
        s.peaks.push_back(best_d);
        d = revise(d, x, best, r_b);
    }
    return s;
}

inline double sicd(const Points& x, const Points& centroids, const std::vector<std::size_t>& cluster) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x[i].size(); ++j) {
            const double diff = centroids[cluster[i]][j] - x[i][j];
            s += diff * diff;
        }
        total += std::sqrt(s);
    }
    return total;
}

inline std::vector<std::size_t> nearest(const Points& x, const Points& centroids) {
    std::vector<std::size_t> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> table(centroids.size());
        for (std::size_t c = 0; c < centroids.size(); ++c) table[c] = dist2(x[i], centroids[c]);
        out[i] = static_cast<std::size_t>(std::min_element(table.begin(), table.end()) - table.begin());
    }
    return out;
}

// Error rate under the best one-to-one mapping, by enumerating every
// injective map from clusters to classes (clusters may stay unmapped).
inline double optimal_error_percent(const std::vector<std::size_t>& cluster, std::size_t k,
                                    const std::vector<int>& labels) {
    const std::size_t classes = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
    std::vector<int> mapping(k, -1);
    std::size_t best = 0;
    std::vector<bool> used(classes, false);
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == k) {
            std::size_t hit = 0;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (mapping[cluster[i]] == labels[i]) ++hit;
            best = std::max(best, hit);
            return;
        }
        mapping[c] = -1;
        rec(c + 1);
        for (std::size_t l = 0; l < classes; ++l) {
            if (used[l]) continue;
            used[l] = true;
            mapping[c] = static_cast<int>(l);
            rec(c + 1);
            used[l] = false;
        }
        mapping[c] = -1;
    };
    rec(0);
    return 100.0 * static_cast<double>(labels.size() - best) / static_cast<double>(labels.size());
}

// Geometric median by Weiszfeld iteration; returns the minimal sum of
// distances from a point to `pts`.
inline double median_cost(const Points& pts) {
    const std::size_t d = pts.front().size();
    std::vector<double> y(d, 0.0);
    for (const auto& p : pts)
        for (std::size_t j = 0; j < d; ++j) y[j] += p[j] / static_cast<double>(pts.size());
    auto cost = [&](const std::vector<double>& c) {
        double s = 0.0;
        for (const auto& p : pts) s += std::sqrt(dist2(p, c));
        return s;
    };
    double best = cost(y);
    // Data points themselves are candidates too (Weiszfeld can stall there).
    for (const auto& p : pts) best = std::min(best, cost(p));
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> num(d, 0.0);
        double den = 0.0;
        bool at_point = false;
        for (const auto& p : pts) {
            const double r = std::sqrt(dist2(p, y));
            if (r < 1e-15) {
                at_point = true;
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) num[j] += p[j] / r;
            den += 1.0 / r;
        }
        if (den == 0.0) break;
        std::vector<double> next(d);
        for (std::size_t j = 0; j < d; ++j) next[j] = num[j] / den;
        const double moved = std::sqrt(dist2(next, y));
        y = next;
        best = std::min(best, cost(y));
        if (moved < 1e-14 || at_point) break;
    }
    return best;
}

// Global minimum SICD over every partition of x into exactly k non-empty
// clusters (free centroids, so each cluster costs its geometric median sum).
inline double optimal_sicd(const Points& x, std::size_t k) {
    const std::size_t n = x.size();
    std::vector<std::size_t> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    // Restricted growth strings enumerate set partitions without repeats.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (n - i < k - used) return;
        if (i == n) {
            if (used != k) return;
            double total = 0.0;
            for (std::size_t c = 0; c < k && total < best; ++c) {
                Points members;
                for (std::size_t p = 0; p < n; ++p)
                    if (label[p] == c) members.push_back(x[p]);
                total += median_cost(members);
            }
            best = std::min(best, total);
            return;
        }
        for (std::size_t c = 0; c < std::min(used + 1, k); ++c) {
            label[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
    return best;
}

// Replayable pseudo-random draws in [0, 1) that do not come from the
// library's Rng.
class Scripted final : public swarmclust::UnitSource {
public:
    explicit Scripted(std::uint64_t state) : state_(state | 1) {}
    explicit Scripted(std::vector<double> values) : values_(std::move(values)) {}

    double uniform01() override {
        if (!values_.empty()) return values_[pos_++ % values_.size()];
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return static_cast<double>(state_ >> 11) / 9007199254740992.0;
    }

private:
    std::uint64_t state_ = 1;
    std::vector<double> values_;
    std::size_t pos_ = 0;
};

// Straight-line PSO on the clustering fitness: velocity and position updates,
// boundary reversion, pbest/gbest bookkeeping. Positions are k*d flat vectors.
struct PsoTrace {
    std::vector<double> gbest_fitness;  // after init, then after each iteration
    std::vector<std::vector<double>> final_positions;
    std::vector<double> gbest;
};

inline PsoTrace pso(const Points& x, std::size_t k, std::vector<std::vector<double>> positions, double c1, double c2,
                    std::function<double(std::size_t)> inertia, bool restrict_to_bounds, std::size_t iterations,
                    swarmclust::UnitSource& draws) {
    const std::size_t d = x.front().size();
    const std::size_t n = k * d;
    auto fitness = [&](const std::vector<double>& pos) {
        double total = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) s += (pos[c * d + j] - p[j]) * (pos[c * d + j] - p[j]);
                best = std::min(best, s);
            }
            total += std::sqrt(best);
        }
        return total;
    };
    std::vector<double> lo(n), hi(n);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            lo[c * d + j] = x[0][j];
            hi[c * d + j] = x[0][j];
            for (const auto& p : x) {
                lo[c * d + j] = std::min(lo[c * d + j], p[j]);
                hi[c * d + j] = std::max(hi[c * d + j], p[j]);
            }
        }
    }
    const std::size_t m = positions.size();
    std::vector<std::vector<double>> vel(m, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> pbest = positions;
    std::vector<double> pfit(m);
    for (std::size_t i = 0; i < m; ++i) pfit[i] = fitness(positions[i]);
    std::size_t g = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (pfit[i] < pfit[g]) g = i;
    std::vector<double> gbest = pbest[g];
    double gfit = pfit[g];

    PsoTrace trace;
    trace.gbest_fitness.push_back(gfit);
    for (std::size_t it = 0; it < iterations; ++it) {
        const double w = inertia(it);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double r1 = draws.uniform01();
                const double r2 = draws.uniform01();
                vel[i][j] = w * vel[i][j] + c1 * r1 * (pbest[i][j] - positions[i][j]) + c2 * r2 * (gbest[j] - positions[i][j]);
            }
            for (std::size_t j = 0; j < n; ++j) {
                positions[i][j] = positions[i][j] + vel[i][j];
                if (restrict_to_bounds && !(positions[i][j] <= hi[j] && positions[i][j] >= lo[j])) {
                    positions[i][j] = std::clamp(positions[i][j] - vel[i][j], lo[j], hi[j]);
                }
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double f = fitness(positions[i]);
            if (f < pfit[i]) {
                pfit[i] = f;
                pbest[i] = positions[i];
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (pfit[i] < gfit) {
                gfit = pfit[i];
                gbest = pbest[i];
            }
        }
        trace.gbest_fitness.push_back(gfit);
    }
    trace.final_positions = positions;
    trace.gbest = gbest;
    return trace;
}

}  // namespace oracle
