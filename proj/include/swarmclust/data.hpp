#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "swarmclust/core.hpp"

namespace swarmclust {

struct LoadError : Error {
    using Error::Error;
};

// Shape a loaded dataset must have exactly. Class sizes are compared as a
// multiset since label ids follow first appearance in the file.
struct ExpectedShape {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<std::size_t> class_sizes;

    friend bool operator==(const ExpectedShape&, const ExpectedShape&) = default;
};

struct CsvSource {
    std::filesystem::path path;
    // Column holding the class label: an index (negative counts from the
    // end, -1 is the last column), a header name, or none.
    std::variant<std::monostate, std::int64_t, std::string> label_column;
    char delimiter = ',';
    bool has_header = false;
    // Columns dropped before parsing features (ids, names), by index or name.
    std::vector<std::variant<std::size_t, std::string>> ignore_columns;
};

enum class BlobKind { two_blob, grid, art_like };

struct BlobParams {
    double separation = 10.0;
    double spread = 0.1;
    std::size_t n = 20;       // total points
    std::size_t dims = 2;
    std::size_t grid_side = 3;  // grid only: grid_side^2 blobs
};

struct SyntheticSource {
    BlobKind kind = BlobKind::two_blob;
    BlobParams params;
    std::uint64_t seed = 0;
};

struct DatasetSpec {
    std::string name;
    std::variant<CsvSource, SyntheticSource> source;
    bool normalize = true;
    std::optional<ExpectedShape> expected;
};

struct NormalizationRecord {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<std::size_t> constant_columns;

    Matrix apply(const Matrix& raw) const;
    Matrix inverse(const Matrix& normalized) const;
    friend bool operator==(const NormalizationRecord&, const NormalizationRecord&) = default;
};

// Parses a CSV into a Dataset. Labels are factorised to 0-based ids in order
// of first appearance. Throws LoadError naming the 1-based line on failure.
Dataset load_csv(const std::string& name, const CsvSource& source,
                 const std::optional<ExpectedShape>& expected = std::nullopt);

// Each non-constant column mapped affinely onto [0, 1]; constant columns to 0.
std::pair<Dataset, NormalizationRecord> normalize_minmax(const Dataset& dataset);

// Labelled Gaussian blobs; deterministic for a given seed.
//   two_blob: centers 0 and separation * e_1, n/2 points each.
//   grid:     grid_side x grid_side centers spaced by separation in dims 0-1.
//   art_like: three 2-D blobs at (0,0), (separation,0), (separation/2, separation).
Dataset make_blobs(BlobKind kind, const BlobParams& params, std::uint64_t seed);

std::string_view blob_kind_id(BlobKind kind);
std::optional<BlobKind> parse_blob_kind(std::string_view id);

// Checks n, d, k and the class-size multiset. Throws LoadError on mismatch.
void check_expected(const Dataset& dataset, const ExpectedShape& expected);

struct LoadedDataset {
    Dataset dataset;
    std::optional<NormalizationRecord> normalization;
};

// Loads (CSV or synthetic), checks the expected shape on the raw data, then
// normalises when spec.normalize is set.
LoadedDataset load_dataset(const DatasetSpec& spec);

// The nine benchmark datasets with their published shapes. CSV files are
// looked up as <data_dir>/<file>.
struct RegistryEntry {
    std::string name;
    std::string file;
    std::string description;
    CsvSource csv;  // path relative to the data directory
    ExpectedShape expected;
};

const std::vector<RegistryEntry>& dataset_registry();
const RegistryEntry* find_registry_entry(std::string_view name);
// SWARMCLUST_DATA_DIR, falling back to ./datasets.
std::filesystem::path default_data_dir();
DatasetSpec registry_spec(const RegistryEntry& entry, const std::filesystem::path& data_dir, bool normalize = true);

}  // namespace swarmclust
