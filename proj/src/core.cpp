#include "swarmclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace swarmclust {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ContractError("matrix data length " + std::to_string(data_.size()) + " != " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw ContractError("ragged rows in Matrix::from_rows");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

Dataset::Dataset(std::string name, Matrix points, std::optional<std::vector<int>> labels,
                 std::optional<std::size_t> k_true)
    : name_(std::move(name)), points_(std::move(points)), labels_(std::move(labels)), k_true_(k_true) {
    if (points_.rows() == 0 || points_.cols() == 0) {
        throw DegenerateInputError("dataset '" + name_ + "' must have at least one point and one dimension");
    }
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        for (double v : points_.row(i)) {
            if (!std::isfinite(v)) {
                throw ContractError("dataset '" + name_ + "' row " + std::to_string(i) + " has a non-finite value");
            }
        }
    }
    if (labels_) {
        if (labels_->size() != points_.rows()) {
            throw ContractError("dataset '" + name_ + "': label count does not match point count");
        }
        // Labels are 0-based ids and every id below the max must occur.
        std::set<int> seen(labels_->begin(), labels_->end());
        if (*seen.begin() < 0 || static_cast<std::size_t>(*seen.rbegin()) + 1 != seen.size()) {
            throw ContractError("dataset '" + name_ + "': labels must be dense 0-based class ids");
        }
    }
    if (k_true_) {
        if (*k_true_ == 0) throw ContractError("dataset '" + name_ + "': k_true must be >= 1");
        if (labels_ && *k_true_ != class_count()) {
            throw ContractError("dataset '" + name_ + "': k_true disagrees with the number of distinct labels");
        }
    }
}

std::size_t Dataset::class_count() const {
    if (!labels_) return 0;
    return static_cast<std::size_t>(*std::max_element(labels_->begin(), labels_->end())) + 1;
}

bool SearchBounds::contains(std::span<const double> x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < lower[j] || x[j] > upper[j]) return false;
    }
    return true;
}

SearchBounds SearchBounds::tiled(std::size_t k) const {
    SearchBounds out;
    out.lower.reserve(k * lower.size());
    out.upper.reserve(k * upper.size());
    for (std::size_t i = 0; i < k; ++i) {
        out.lower.insert(out.lower.end(), lower.begin(), lower.end());
        out.upper.insert(out.upper.end(), upper.begin(), upper.end());
    }
    return out;
}

std::vector<std::size_t> Assignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto c : cluster_of) ++sizes[c];
    return sizes;
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ContractError("squared_euclidean: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        sum += diff * diff;
    }
    return sum;
}

SearchBounds bounds_of(const Dataset& dataset) {
    const auto& pts = dataset.points();
    SearchBounds b{std::vector<double>(pts.row(0).begin(), pts.row(0).end()),
                   std::vector<double>(pts.row(0).begin(), pts.row(0).end())};
    for (std::size_t i = 1; i < pts.rows(); ++i) {
        auto r = pts.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            b.lower[j] = std::min(b.lower[j], r[j]);
            b.upper[j] = std::max(b.upper[j], r[j]);
        }
    }
    return b;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) { return mix64(seed + stream); }

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw ContractError("Rng::below(0)");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
    if (spare_normal_) {
        const double v = *spare_normal_;
        spare_normal_.reset();
        return v;
    }
    double u1;
    do {
        u1 = uniform01();
    } while (u1 == 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

}  // namespace swarmclust
