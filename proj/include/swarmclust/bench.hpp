#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmclust/data.hpp"
#include "swarmclust/metrics.hpp"
#include "swarmclust/pipelines.hpp"

namespace swarmclust::bench {

inline constexpr int schema_version = 1;
inline constexpr const char* library_version = "0.1.0";

struct ConfigError : Error {
    using Error::Error;
};

enum class SeedingMode {
    automatic,     // fixed_k(k_true) when the dataset knows its k, else density_ratio
    fixed_k,
    density_ratio,
};

struct AlgorithmSpec {
    Algorithm algorithm = Algorithm::pso;
    std::optional<std::size_t> k;  // overrides the dataset's k_true
    PsoConfig pso;                 // defaults merged with overrides
    SubtractiveConfig subtractive;
    SeedingMode seeding = SeedingMode::automatic;
    std::size_t kmeans_max_iter = default_kmeans_max_iter;
};

struct EmitFormats {
    bool json = true;
    bool csv = true;
    bool plot_data = true;
};

struct BenchConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<AlgorithmSpec> algorithms;
    std::size_t repetitions = 1;
    std::uint64_t base_seed = 0;
    std::filesystem::path output_dir = "bench_out";
    EmitFormats emit;
    MappingMode mapping = MappingMode::optimal;
    nlohmann::json source;  // the parsed config document, echoed into reports
};

// Parses and validates a config document. Throws ConfigError.
BenchConfig parse_config(const nlohmann::json& doc);
BenchConfig load_config(const std::filesystem::path& path);

struct CellFilter {
    std::set<std::string> datasets;
    std::set<std::string> algorithms;

    bool accepts(const std::string& dataset, const std::string& algorithm) const;
};

// "dataset=iris,algo=pso,algo=brapso"; repeated keys accumulate.
void parse_filter(const std::string& text, CellFilter& filter);

struct GridOptions {
    std::size_t jobs = 1;
    CellFilter filter;
};

struct CellRecord {
    std::string dataset;
    std::string algorithm;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string message;  // failure diagnostic
    std::size_t k = 0;
    double sicd = 0.0;
    std::optional<double> error_percent;
    std::size_t iterations = 0;
    std::size_t iterations_to_converge = 0;
    double wall_ms = 0.0;
    std::vector<double> trace;

    friend bool operator==(const CellRecord&, const CellRecord&) = default;
};

struct Aggregate {
    std::string dataset;
    std::string algorithm;
    std::size_t runs = 0;  // successful cells
    double sicd_mean = 0.0;
    double sicd_std = 0.0;  // sample standard deviation, 0 for a single run
    double sicd_best = 0.0;
    double sicd_worst = 0.0;
    std::optional<double> error_mean;
    double iterations_mean = 0.0;
    double iterations_to_converge_mean = 0.0;

    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct BenchReport {
    int schema = schema_version;
    nlohmann::json config;
    std::map<std::string, NormalizationRecord> normalization;
    std::vector<CellRecord> records;
    std::vector<Aggregate> aggregates;

    std::size_t failed_cells() const;
    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

// Seed of repetition r of the cell (dataset position, algorithm position) in
// the unfiltered grid. Distinct for every cell of a grid.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t dataset_pos, std::size_t algorithm_pos,
                        std::size_t repetition, std::size_t algorithm_count, std::size_t repetitions);

// Loads every dataset (ConfigError on failure), then runs the filtered grid
// on `jobs` worker threads. Failing cells are recorded, not thrown.
BenchReport run_grid(const BenchConfig& config, const GridOptions& options = {});

std::vector<Aggregate> compute_aggregates(const std::vector<CellRecord>& records);

nlohmann::json report_to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::json& doc);

std::string records_csv(const BenchReport& report);
std::string plot_data_csv(const BenchReport& report);

// Writes report.json, records.csv and plot_data.csv into `dir` (each via a
// temporary file and a rename). Returns the written paths.
std::vector<std::filesystem::path> emit_report(const BenchReport& report, const std::filesystem::path& dir,
                                               const EmitFormats& formats);

}  // namespace swarmclust::bench
