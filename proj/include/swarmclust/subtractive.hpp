#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "swarmclust/core.hpp"

namespace swarmclust {

// Subtractive clustering: every data point is a candidate center, scored by
// a Gaussian density of its neighbours. The densest point becomes a center,
// the densities around it are suppressed, and the process repeats.

struct FixedK {
    std::size_t k = 1;
};

// Stop before accepting a center whose density is below epsilon times the
// density of the first center.
struct DensityRatio {
    double epsilon = 0.15;
};

using StopRule = std::variant<FixedK, DensityRatio>;

struct SubtractiveConfig {
    double r_a = 0.5;
    std::optional<double> r_b;  // defaults to 1.5 * r_a
    StopRule stop_rule = DensityRatio{};
    std::size_t max_centers = 64;

    double suppression_radius() const { return r_b.value_or(1.5 * r_a); }
    // Throws ContractError on an invalid configuration.
    void validate() const;
};

struct SeedingResult {
    Matrix centers;                              // k x d, rows of the input in selection order
    std::vector<std::size_t> indices;            // dataset row of each center
    std::size_t k = 0;
    double first_peak_density = 0.0;
    std::vector<double> densities_at_selection;  // density of each center when it was picked
};

// D_i = sum_j exp(-|x_i - x_j|^2 / (r_a/2)^2). The summation order per row is
// fixed (j ascending). If `kernel_evals` is given it is incremented once per
// kernel term, N^2 in total.
std::vector<double> density_initial(const Matrix& points, double r_a, std::size_t* kernel_evals = nullptr);

// D_i - D_c * exp(-|x_i - x_c|^2 / (r_b/2)^2). The entry at the center is
// set to exactly zero. Negative results are kept.
std::vector<double> density_revise(std::span<const double> densities, std::size_t center_index,
                                   double center_density, const Matrix& points, double r_b);

// Greedy peak picking until the stop rule fires. Ties go to the lowest row
// index; rows already chosen are never picked again.
SeedingResult select_centers(const Dataset& dataset, const SubtractiveConfig& config);

}  // namespace swarmclust
