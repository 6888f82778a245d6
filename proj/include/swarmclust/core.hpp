#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmclust {

// Error hierarchy. Everything the library throws derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractError : Error {
    using Error::Error;
};
struct DegenerateInputError : Error {
    using Error::Error;
};
struct UnsupportedEvaluationError : Error {
    using Error::Error;
};

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// N points in d dimensions, optionally labelled. Validated on construction
// and immutable afterwards.
class Dataset {
public:
    Dataset(std::string name, Matrix points, std::optional<std::vector<int>> labels = std::nullopt,
            std::optional<std::size_t> k_true = std::nullopt);

    const std::string& name() const { return name_; }
    const Matrix& points() const { return points_; }
    const std::optional<std::vector<int>>& labels() const { return labels_; }
    std::optional<std::size_t> k_true() const { return k_true_; }

    std::size_t size() const { return points_.rows(); }
    std::size_t dims() const { return points_.cols(); }
    std::span<const double> point(std::size_t i) const { return points_.row(i); }

    // Number of distinct labels; 0 when unlabelled.
    std::size_t class_count() const;

private:
    std::string name_;
    Matrix points_;
    std::optional<std::vector<int>> labels_;
    std::optional<std::size_t> k_true_;
};

struct SearchBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dims() const { return lower.size(); }
    bool contains(std::span<const double> x) const;
    // Bounds repeated k times, matching a flattened k x d particle.
    SearchBounds tiled(std::size_t k) const;
};

struct Assignment {
    std::vector<std::size_t> cluster_of;
    std::size_t k = 0;

    std::vector<std::size_t> cluster_sizes() const;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

double squared_euclidean(std::span<const double> a, std::span<const double> b);
SearchBounds bounds_of(const Dataset& dataset);

// Source of uniform draws in [0, 1). The swarm code draws through this
// interface so tests can replay scripted streams.
class UnitSource {
public:
    virtual ~UnitSource() = default;
    virtual double uniform01() = 0;
};

// SplitMix64 finalizer. A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Seed of the subordinate stream `stream` of `seed`: mix64(seed + stream).
// Injective in `stream` for a fixed seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

// Fixed stream offsets used by the pipelines.
namespace streams {
inline constexpr std::uint64_t swarm_init = 1;
inline constexpr std::uint64_t swarm_motion = 2;
inline constexpr std::uint64_t kmeans_init = 3;
inline constexpr std::uint64_t generator = 4;
}  // namespace streams

// Seeded 64-bit Mersenne twister. The engine output sequence is fixed by the
// standard; the conversion to [0, 1) uses the top 53 bits so draws are
// identical on every platform.
class Rng final : public UnitSource {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    double uniform01() override;
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    // Uniform integer in [0, n). n must be > 0.
    std::size_t below(std::size_t n);
    // Standard normal via Box-Muller (one value per call, pairs cached).
    double normal();
    std::uint64_t next_u64() { return engine_(); }

    Rng derive(std::uint64_t stream) const { return Rng(split_seed(seed_, stream)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

}  // namespace swarmclust
