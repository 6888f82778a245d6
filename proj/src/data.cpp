#include "swarmclust/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace swarmclust {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

std::optional<double> parse_double(std::string_view field) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

std::size_t resolve_column(const std::variant<std::size_t, std::string>& column, const std::vector<std::string>& header,
                           std::size_t columns, const std::filesystem::path& path) {
    if (const auto* index = std::get_if<std::size_t>(&column)) {
        if (*index >= columns) throw LoadError(path.string() + ": column index " + std::to_string(*index) + " out of range");
        return *index;
    }
    const auto& name = std::get<std::string>(column);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw LoadError(path.string() + ": no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Matrix NormalizationRecord::apply(const Matrix& raw) const {
    if (raw.cols() != min.size()) throw ContractError("normalization record dimension mismatch");
    Matrix out(raw.rows(), raw.cols());
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        for (std::size_t j = 0; j < raw.cols(); ++j) {
            const double range = max[j] - min[j];
            out(i, j) = range > 0.0 ? (raw(i, j) - min[j]) / range : 0.0;
        }
    }
    return out;
}

Matrix NormalizationRecord::inverse(const Matrix& normalized) const {
    if (normalized.cols() != min.size()) throw ContractError("normalization record dimension mismatch");
    Matrix out(normalized.rows(), normalized.cols());
    for (std::size_t i = 0; i < normalized.rows(); ++i) {
        for (std::size_t j = 0; j < normalized.cols(); ++j) {
            out(i, j) = min[j] + normalized(i, j) * (max[j] - min[j]);
        }
    }
    return out;
}

Dataset load_csv(const std::string& name, const CsvSource& source, const std::optional<ExpectedShape>& expected) {
    std::ifstream in(source.path);
    if (!in) throw LoadError("cannot open '" + source.path.string() + "'");

    std::vector<std::string> header;
    std::optional<std::size_t> columns;
    std::optional<std::size_t> label_col;
    std::vector<bool> dropped;
    std::vector<double> values;
    std::vector<int> labels;
    std::map<std::string, int, std::less<>> label_ids;
    std::size_t rows = 0;

    auto setup = [&](std::size_t ncols) {
        columns = ncols;
        dropped.assign(ncols, false);
        if (const auto* idx = std::get_if<std::int64_t>(&source.label_column)) {
            const std::int64_t resolved = *idx < 0 ? static_cast<std::int64_t>(ncols) + *idx : *idx;
            if (resolved < 0 || resolved >= static_cast<std::int64_t>(ncols)) {
                throw LoadError(source.path.string() + ": label column " + std::to_string(*idx) + " out of range");
            }
            label_col = static_cast<std::size_t>(resolved);
        } else if (const auto* label_name = std::get_if<std::string>(&source.label_column)) {
            label_col = resolve_column(*label_name, header, ncols, source.path);
        }
        for (const auto& col : source.ignore_columns) dropped[resolve_column(col, header, ncols, source.path)] = true;
        if (label_col) dropped[*label_col] = true;
        if (std::count(dropped.begin(), dropped.end(), false) == 0) {
            throw LoadError(source.path.string() + ": no feature columns left");
        }
    };

    std::string line;
    std::size_t line_no = 0;
    bool header_pending = source.has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, source.delimiter);
        if (header_pending) {
            for (auto f : fields) header.emplace_back(f);
            header_pending = false;
            continue;
        }
        if (!columns) setup(header.empty() ? fields.size() : header.size());
        if (fields.size() != *columns) {
            throw LoadError(where(source.path, line_no) + ": expected " + std::to_string(*columns) + " fields, found " +
                            std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (dropped[c]) continue;
            const auto v = parse_double(fields[c]);
            if (!v) {
                throw LoadError(where(source.path, line_no) + ": non-numeric feature '" + std::string(fields[c]) +
                                "' in column " + std::to_string(c));
            }
            values.push_back(*v);
        }
        if (label_col) {
            const std::string key(fields[*label_col]);
            auto [it, inserted] = label_ids.try_emplace(key, static_cast<int>(label_ids.size()));
            labels.push_back(it->second);
        }
        ++rows;
    }
    if (rows == 0) throw LoadError("'" + source.path.string() + "' contains no data rows");

    const std::size_t d = values.size() / rows;
    std::optional<std::vector<int>> maybe_labels;
    std::optional<std::size_t> k_true;
    if (label_col) {
        k_true = label_ids.size();
        maybe_labels = std::move(labels);
    }
    Dataset dataset(name, Matrix(rows, d, std::move(values)), std::move(maybe_labels), k_true);
    if (expected) check_expected(dataset, *expected);
    return dataset;
}

void check_expected(const Dataset& dataset, const ExpectedShape& expected) {
    std::ostringstream problems;
    if (dataset.size() != expected.n) problems << " n=" << dataset.size() << " (expected " << expected.n << ")";
    if (dataset.dims() != expected.d) problems << " d=" << dataset.dims() << " (expected " << expected.d << ")";
    if (!expected.class_sizes.empty() || expected.k != 0) {
        if (!dataset.labels()) {
            problems << " no labels (expected " << expected.k << " classes)";
        } else {
            const std::size_t k = dataset.class_count();
            if (expected.k != 0 && k != expected.k) problems << " k=" << k << " (expected " << expected.k << ")";
            if (!expected.class_sizes.empty()) {
                std::vector<std::size_t> sizes(k, 0);
                for (int l : *dataset.labels()) ++sizes[static_cast<std::size_t>(l)];
                auto want = expected.class_sizes;
                std::sort(sizes.begin(), sizes.end());
                std::sort(want.begin(), want.end());
                if (sizes != want) problems << " class sizes differ from the expected multiset";
            }
        }
    }
    if (!problems.str().empty()) {
        throw LoadError("dataset '" + dataset.name() + "' does not match its expected shape:" + problems.str());
    }
}

std::pair<Dataset, NormalizationRecord> normalize_minmax(const Dataset& dataset) {
    const auto bounds = bounds_of(dataset);
    NormalizationRecord record{bounds.lower, bounds.upper, {}};
    for (std::size_t j = 0; j < bounds.dims(); ++j) {
        if (!(bounds.upper[j] > bounds.lower[j])) record.constant_columns.push_back(j);
    }
    Dataset normalized(dataset.name(), record.apply(dataset.points()), dataset.labels(), dataset.k_true());
    return {std::move(normalized), std::move(record)};
}

std::string_view blob_kind_id(BlobKind kind) {
    switch (kind) {
        case BlobKind::two_blob: return "two_blob";
        case BlobKind::grid: return "grid";
        case BlobKind::art_like: return "art_like";
    }
    return "unknown";
}

std::optional<BlobKind> parse_blob_kind(std::string_view id) {
    for (auto kind : {BlobKind::two_blob, BlobKind::grid, BlobKind::art_like}) {
        if (blob_kind_id(kind) == id) return kind;
    }
    return std::nullopt;
}

Dataset make_blobs(BlobKind kind, const BlobParams& params, std::uint64_t seed) {
    if (params.dims < 1) throw ContractError("make_blobs: dims must be >= 1");
    if (!(params.spread >= 0.0) || !std::isfinite(params.separation)) {
        throw ContractError("make_blobs: spread must be >= 0 and separation finite");
    }

    std::vector<std::vector<double>> centers;
    switch (kind) {
        case BlobKind::two_blob: {
            std::vector<double> far(params.dims, 0.0);
            far[0] = params.separation;
            centers = {std::vector<double>(params.dims, 0.0), far};
            break;
        }
        case BlobKind::grid: {
            if (params.dims < 2) throw ContractError("make_blobs: grid needs dims >= 2");
            if (params.grid_side < 1) throw ContractError("make_blobs: grid_side must be >= 1");
            for (std::size_t b = 0; b < params.grid_side * params.grid_side; ++b) {
                std::vector<double> c(params.dims, 0.0);
                c[0] = params.separation * static_cast<double>(b % params.grid_side);
                c[1] = params.separation * static_cast<double>(b / params.grid_side);
                centers.push_back(std::move(c));
            }
            break;
        }
        case BlobKind::art_like: {
            if (params.dims < 2) throw ContractError("make_blobs: art_like needs dims >= 2");
            const double s = params.separation;
            for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{s, 0.0}, std::pair{s / 2.0, s}}) {
                std::vector<double> c(params.dims, 0.0);
                c[0] = x;
                c[1] = y;
                centers.push_back(std::move(c));
            }
            break;
        }
    }
    const std::size_t blobs = centers.size();
    if (params.n < blobs) {
        throw DegenerateInputError("make_blobs: n = " + std::to_string(params.n) + " is smaller than the " +
                                   std::to_string(blobs) + " blobs");
    }

    // Contiguous runs per blob: blob b gets n/blobs points, the first n%blobs
    // blobs one extra.
    Rng rng(split_seed(seed, streams::generator));
    Matrix points(params.n, params.dims);
    std::vector<int> labels(params.n);
    std::size_t row = 0;
    for (std::size_t b = 0; b < blobs; ++b) {
        const std::size_t count = params.n / blobs + (b < params.n % blobs ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i, ++row) {
            for (std::size_t j = 0; j < params.dims; ++j) points(row, j) = centers[b][j] + params.spread * rng.normal();
            labels[row] = static_cast<int>(b);
        }
    }
    return Dataset(std::string(blob_kind_id(kind)), std::move(points), std::move(labels), blobs);
}

LoadedDataset load_dataset(const DatasetSpec& spec) {
    Dataset raw = [&]() {
        if (const auto* csv = std::get_if<CsvSource>(&spec.source)) return load_csv(spec.name, *csv, spec.expected);
        const auto& syn = std::get<SyntheticSource>(spec.source);
        Dataset generated = make_blobs(syn.kind, syn.params, syn.seed);
        Dataset named(spec.name, generated.points(), generated.labels(), generated.k_true());
        if (spec.expected) check_expected(named, *spec.expected);
        return named;
    }();
    if (!spec.normalize) return {std::move(raw), std::nullopt};
    auto [normalized, record] = normalize_minmax(raw);
    return {std::move(normalized), std::move(record)};
}

const std::vector<RegistryEntry>& dataset_registry() {
    // Prepared files: one row per instance, features first, class label in
    // the last column, comma separated, no header (see scripts/fetch_datasets.py).
    static const std::vector<RegistryEntry> registry = [] {
        auto entry = [](std::string name, std::string file, std::string description, std::size_t n, std::size_t d,
                        std::vector<std::size_t> sizes) {
            CsvSource csv;
            csv.path = file;
            csv.label_column = std::int64_t{-1};
            ExpectedShape shape{n, d, sizes.size(), std::move(sizes)};
            return RegistryEntry{std::move(name), std::move(file), std::move(description), std::move(csv),
                                 std::move(shape)};
        };
        return std::vector<RegistryEntry>{
            entry("cancer", "cancer.csv", "Breast Cancer Wisconsin (original), rows with missing values removed", 683, 9,
                  {444, 239}),
            entry("cmc", "cmc.csv", "Contraceptive Method Choice", 1473, 9, {629, 334, 510}),
            entry("crude_oil", "crude_oil.csv", "Crude oil samples from three sandstone zones", 56, 5, {7, 11, 38}),
            entry("glass", "glass.csv", "Glass Identification (6 types present)", 214, 9, {70, 17, 76, 13, 9, 29}),
            entry("iris", "iris.csv", "Iris", 150, 4, {50, 50, 50}),
            entry("pima", "pima.csv", "Pima Indians Diabetes", 768, 8, {500, 268}),
            entry("vowel", "vowel.csv", "Indian Telugu vowel formants", 871, 3, {72, 89, 172, 151, 207, 180}),
            entry("wine", "wine.csv", "Wine", 178, 13, {59, 71, 48}),
            entry("zoo", "zoo.csv", "Zoo", 101, 17, {41, 20, 5, 13, 4, 8, 10}),
        };
    }();
    return registry;
}

const RegistryEntry* find_registry_entry(std::string_view name) {
    for (const auto& e : dataset_registry()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("SWARMCLUST_DATA_DIR"); env && *env) return env;
    return "datasets";
}

DatasetSpec registry_spec(const RegistryEntry& entry, const std::filesystem::path& data_dir, bool normalize) {
    CsvSource csv = entry.csv;
    csv.path = data_dir / entry.file;
    return DatasetSpec{entry.name, csv, normalize, entry.expected};
}

}  // namespace swarmclust
