#include "swarmclust/subtractive.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace swarmclust {

void SubtractiveConfig::validate() const {
    if (!(r_a > 0.0) || !std::isfinite(r_a)) throw ContractError("subtractive: r_a must be positive");
    const double rb = suppression_radius();
    if (!(rb > 0.0) || !std::isfinite(rb)) throw ContractError("subtractive: r_b must be positive");
    if (max_centers < 1) throw ContractError("subtractive: max_centers must be >= 1");
    if (const auto* fixed = std::get_if<FixedK>(&stop_rule)) {
        if (fixed->k < 1) throw ContractError("subtractive: fixed_k requires k >= 1");
        if (fixed->k > max_centers) {
            throw ContractError("subtractive: fixed_k(" + std::to_string(fixed->k) + ") exceeds max_centers");
        }
    } else {
        const double eps = std::get<DensityRatio>(stop_rule).epsilon;
        if (!(eps > 0.0 && eps < 1.0)) throw ContractError("subtractive: density_ratio epsilon must lie in (0, 1)");
    }
}

std::vector<double> density_initial(const Matrix& points, double r_a, std::size_t* kernel_evals) {
    if (!(r_a > 0.0)) throw ContractError("density_initial: r_a must be positive");
    const double half = r_a / 2.0;
    const double denom = half * half;
    const std::size_t n = points.rows();
    std::vector<double> density(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += std::exp(-squared_euclidean(points.row(i), points.row(j)) / denom);
        }
        density[i] = sum;
    }
    if (kernel_evals) *kernel_evals += n * n;
    return density;
}

std::vector<double> density_revise(std::span<const double> densities, std::size_t center_index,
                                   double center_density, const Matrix& points, double r_b) {
    if (center_index >= densities.size() || densities.size() != points.rows()) {
        throw ContractError("density_revise: center index or density length out of range");
    }
    if (!(r_b > 0.0)) throw ContractError("density_revise: r_b must be positive");
    const double half = r_b / 2.0;
    const double denom = half * half;
    const auto center = points.row(center_index);
    std::vector<double> revised(densities.begin(), densities.end());
    for (std::size_t i = 0; i < revised.size(); ++i) {
        revised[i] -= center_density * std::exp(-squared_euclidean(points.row(i), center) / denom);
    }
    revised[center_index] = 0.0;
    return revised;
}

SeedingResult select_centers(const Dataset& dataset, const SubtractiveConfig& config) {
    config.validate();
    const auto& points = dataset.points();
    const std::size_t n = points.rows();

    std::size_t target;
    std::optional<double> epsilon;
    if (const auto* fixed = std::get_if<FixedK>(&config.stop_rule)) {
        if (fixed->k > n) {
            throw DegenerateInputError("select_centers: fixed_k(" + std::to_string(fixed->k) + ") exceeds the " +
                                       std::to_string(n) + " available points");
        }
        target = fixed->k;
    } else {
        epsilon = std::get<DensityRatio>(config.stop_rule).epsilon;
        target = std::min(config.max_centers, n);
    }

    std::vector<double> density = density_initial(points, config.r_a);
    std::vector<bool> chosen(n, false);
    SeedingResult result;
    const double r_b = config.suppression_radius();

    while (result.indices.size() < target) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            if (best == n || density[i] > density[best]) best = i;
        }
        assert(best < n);
        const double peak = density[best];
        if (result.indices.empty()) {
            // The self-term alone contributes 1 to every initial density.
            assert(peak >= 1.0);
            result.first_peak_density = peak;
        } else if (epsilon && peak < *epsilon * result.first_peak_density) {
            break;
        }
        chosen[best] = true;
        result.indices.push_back(best);
        result.densities_at_selection.push_back(peak);
        density = density_revise(density, best, peak, points, r_b);
    }

    result.k = result.indices.size();
    result.centers = Matrix(result.k, points.cols());
    for (std::size_t c = 0; c < result.k; ++c) {
        auto src = points.row(result.indices[c]);
        std::copy(src.begin(), src.end(), result.centers.row(c).begin());
    }
    return result;
}

}  // namespace swarmclust
