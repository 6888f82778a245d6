#include "swarmclust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace swarmclust::bench {

using nlohmann::json;

namespace {

// ---- config parsing -------------------------------------------------------

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            fail(where, "unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(where + "." + key, e.what());
    }
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(where + "." + key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

PsoConfig parse_pso(const json& obj, PsoConfig cfg, const std::string& where) {
    check_keys(obj, where,
               {"c1", "c2", "inertia", "max_iter", "swarm_size", "boundary", "v_max_fraction", "convergence"});
    cfg.c1 = get_or(obj, "c1", cfg.c1, where);
    cfg.c2 = get_or(obj, "c2", cfg.c2, where);
    cfg.max_iter = get_count(obj, "max_iter", cfg.max_iter, where);
    cfg.swarm_size = get_count(obj, "swarm_size", cfg.swarm_size, where);
    if (obj.contains("inertia")) {
        const auto& in = obj.at("inertia");
        const std::string w = where + ".inertia";
        check_keys(in, w, {"kind", "w_max", "w_min"});
        const auto kind = get_or<std::string>(in, "kind", "", w);
        if (kind == "linear") cfg.inertia.kind = InertiaKind::linear;
        else if (kind == "exponential_literal") cfg.inertia.kind = InertiaKind::exponential_literal;
        else if (kind == "exponential_normalized") cfg.inertia.kind = InertiaKind::exponential_normalized;
        else if (!kind.empty()) fail(w, "unknown inertia kind '" + kind + "'");
        cfg.inertia.w_max = get_or(in, "w_max", cfg.inertia.w_max, w);
        cfg.inertia.w_min = get_or(in, "w_min", cfg.inertia.w_min, w);
    }
    if (obj.contains("boundary")) {
        const auto b = get_or<std::string>(obj, "boundary", "", where);
        if (b == "restricted") cfg.boundary = BoundaryMode::restricted;
        else if (b == "none") cfg.boundary = BoundaryMode::none;
        else fail(where + ".boundary", "expected 'restricted' or 'none'");
    }
    if (obj.contains("v_max_fraction")) {
        const auto& v = obj.at("v_max_fraction");
        if (v.is_null()) cfg.v_max_fraction.reset();
        else cfg.v_max_fraction = get_or(obj, "v_max_fraction", 1.0, where);
    }
    if (obj.contains("convergence")) {
        const auto& c = obj.at("convergence");
        const std::string w = where + ".convergence";
        check_keys(c, w, {"stall_iters", "rel_tol"});
        cfg.convergence.stall_iters = get_count(c, "stall_iters", cfg.convergence.stall_iters, w);
        cfg.convergence.rel_tol = get_or(c, "rel_tol", cfg.convergence.rel_tol, w);
    }
    try {
        cfg.validate();
    } catch (const ContractError& e) {
        fail(where, e.what());
    }
    return cfg;
}

AlgorithmSpec parse_algorithm_entry(const json& entry, const std::string& where) {
    AlgorithmSpec spec;
    std::string id;
    if (entry.is_string()) {
        id = entry.get<std::string>();
    } else {
        check_keys(entry, where, {"id", "k", "pso", "subtractive", "kmeans_max_iter"});
        id = get_or<std::string>(entry, "id", "", where);
    }
    const auto algorithm = parse_algorithm(id);
    if (!algorithm) fail(where, "unknown algorithm id '" + id + "'");
    spec.algorithm = *algorithm;
    spec.pso = default_pso_config(spec.algorithm);
    spec.subtractive = default_subtractive_config();
    if (!entry.is_object()) return spec;

    if (entry.contains("k")) {
        spec.k = get_count(entry, "k", 0, where);
        if (*spec.k == 0) fail(where + ".k", "must be >= 1");
    }
    spec.kmeans_max_iter = get_count(entry, "kmeans_max_iter", spec.kmeans_max_iter, where);
    if (entry.contains("pso")) spec.pso = parse_pso(entry.at("pso"), spec.pso, where + ".pso");
    if (entry.contains("subtractive")) {
        const auto& sub = entry.at("subtractive");
        const std::string w = where + ".subtractive";
        check_keys(sub, w, {"r_a", "r_b", "max_centers", "seeding", "epsilon"});
        spec.subtractive.r_a = get_or(sub, "r_a", spec.subtractive.r_a, w);
        if (sub.contains("r_b")) spec.subtractive.r_b = get_or(sub, "r_b", 0.0, w);
        spec.subtractive.max_centers = get_count(sub, "max_centers", spec.subtractive.max_centers, w);
        const auto seeding = get_or<std::string>(sub, "seeding", "auto", w);
        if (seeding == "auto") spec.seeding = SeedingMode::automatic;
        else if (seeding == "fixed_k") spec.seeding = SeedingMode::fixed_k;
        else if (seeding == "density_ratio") spec.seeding = SeedingMode::density_ratio;
        else fail(w + ".seeding", "expected 'auto', 'fixed_k' or 'density_ratio'");
        spec.subtractive.stop_rule = DensityRatio{get_or(sub, "epsilon", 0.15, w)};
        try {
            spec.subtractive.validate();
        } catch (const ContractError& e) {
            fail(w, e.what());
        }
    }
    return spec;
}

ExpectedShape parse_expected(const json& obj, const std::string& where) {
    check_keys(obj, where, {"n", "d", "k", "class_sizes"});
    ExpectedShape shape;
    shape.n = get_count(obj, "n", 0, where);
    shape.d = get_count(obj, "d", 0, where);
    shape.k = get_count(obj, "k", 0, where);
    shape.class_sizes = get_or(obj, "class_sizes", std::vector<std::size_t>{}, where);
    return shape;
}

DatasetSpec parse_dataset(const json& obj, const std::filesystem::path& data_dir, const std::string& where) {
    check_keys(obj, where, {"name", "registry", "csv", "synthetic", "normalize", "expected"});
    const int sources = int(obj.contains("registry")) + int(obj.contains("csv")) + int(obj.contains("synthetic"));
    if (sources != 1) fail(where, "exactly one of 'registry', 'csv' or 'synthetic' is required");
    const bool normalize = get_or(obj, "normalize", true, where);

    DatasetSpec spec;
    if (obj.contains("registry")) {
        const auto id = get_or<std::string>(obj, "registry", "", where);
        const auto* entry = find_registry_entry(id);
        if (!entry) fail(where + ".registry", "unknown registry dataset '" + id + "'");
        spec = registry_spec(*entry, data_dir, normalize);
    } else if (obj.contains("csv")) {
        const auto& c = obj.at("csv");
        const std::string w = where + ".csv";
        check_keys(c, w, {"path", "label_column", "delimiter", "header", "ignore_columns"});
        CsvSource csv;
        csv.path = get_or<std::string>(c, "path", "", w);
        if (csv.path.empty()) fail(w + ".path", "required");
        if (c.contains("label_column")) {
            const auto& l = c.at("label_column");
            if (l.is_string()) csv.label_column = l.get<std::string>();
            else if (l.is_number_integer()) csv.label_column = l.get<std::int64_t>();
            else if (!l.is_null()) fail(w + ".label_column", "expected an index or a column name");
        }
        const auto delim = get_or<std::string>(c, "delimiter", ",", w);
        if (delim.size() != 1) fail(w + ".delimiter", "must be a single character");
        csv.delimiter = delim[0];
        csv.has_header = get_or(c, "header", false, w);
        if (c.contains("ignore_columns")) {
            for (const auto& col : c.at("ignore_columns")) {
                if (col.is_string()) csv.ignore_columns.emplace_back(col.get<std::string>());
                else if (col.is_number_unsigned()) csv.ignore_columns.emplace_back(col.get<std::size_t>());
                else fail(w + ".ignore_columns", "entries must be indices or names");
            }
        }
        spec.source = csv;
        spec.normalize = normalize;
    } else {
        const auto& s = obj.at("synthetic");
        const std::string w = where + ".synthetic";
        check_keys(s, w, {"kind", "separation", "spread", "n", "dims", "grid_side", "seed"});
        SyntheticSource syn;
        const auto kind = get_or<std::string>(s, "kind", "two_blob", w);
        const auto parsed = parse_blob_kind(kind);
        if (!parsed) fail(w + ".kind", "unknown blob kind '" + kind + "'");
        syn.kind = *parsed;
        syn.params.separation = get_or(s, "separation", syn.params.separation, w);
        syn.params.spread = get_or(s, "spread", syn.params.spread, w);
        syn.params.n = get_count(s, "n", syn.params.n, w);
        syn.params.dims = get_count(s, "dims", syn.params.dims, w);
        syn.params.grid_side = get_count(s, "grid_side", syn.params.grid_side, w);
        syn.seed = get_or<std::uint64_t>(s, "seed", 0, w);
        spec.source = syn;
        spec.normalize = normalize;
    }
    spec.name = get_or<std::string>(obj, "name", spec.name, where);
    if (spec.name.empty()) fail(where + ".name", "required");
    if (obj.contains("expected")) spec.expected = parse_expected(obj.at("expected"), where + ".expected");
    return spec;
}

// ---- helpers --------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out) throw Error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::size_t> needed_k(const AlgorithmSpec& spec, const Dataset& dataset) {
    if (spec.k) return spec.k;
    return dataset.k_true();
}

bool uses_fixed_k(const AlgorithmSpec& spec, const Dataset& dataset) {
    switch (spec.seeding) {
        case SeedingMode::fixed_k: return true;
        case SeedingMode::density_ratio: return false;
        case SeedingMode::automatic: return needed_k(spec, dataset).has_value();
    }
    return false;
}

bool requires_k(const AlgorithmSpec& spec, const Dataset& dataset) {
    switch (spec.algorithm) {
        case Algorithm::sub_pso:
        case Algorithm::sc_br_apso: return uses_fixed_k(spec, dataset);
        default: return true;
    }
}

AlgorithmParams resolve_params(const AlgorithmSpec& spec, const Dataset& dataset) {
    AlgorithmParams params;
    params.k = needed_k(spec, dataset);
    params.pso = spec.pso;
    params.kmeans_max_iter = spec.kmeans_max_iter;
    params.subtractive = spec.subtractive;
    if (uses_fixed_k(spec, dataset)) {
        params.subtractive.stop_rule = FixedK{*params.k};
        params.subtractive.max_centers = std::max(params.subtractive.max_centers, *params.k);
    }
    return params;
}

json normalization_to_json(const NormalizationRecord& r) {
    return {{"min", r.min}, {"max", r.max}, {"constant_columns", r.constant_columns}};
}

NormalizationRecord normalization_from_json(const json& j) {
    return {j.at("min").get<std::vector<double>>(), j.at("max").get<std::vector<double>>(),
            j.at("constant_columns").get<std::vector<std::size_t>>()};
}

}  // namespace

BenchConfig parse_config(const json& doc) {
    check_keys(doc, "config",
               {"schema_version", "name", "description", "datasets", "algorithms", "repetitions", "base_seed",
                "output_dir", "emit", "mapping", "data_dir"});
    const auto version = get_or(doc, "schema_version", schema_version, "config");
    if (version != schema_version) fail("config.schema_version", "unsupported version " + std::to_string(version));

    BenchConfig cfg;
    cfg.source = doc;
    const std::filesystem::path data_dir =
        doc.contains("data_dir") ? std::filesystem::path(get_or<std::string>(doc, "data_dir", "", "config"))
                                 : default_data_dir();

    if (!doc.contains("datasets") || !doc.at("datasets").is_array() || doc.at("datasets").empty()) {
        fail("config.datasets", "a non-empty list is required");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc.at("datasets").size(); ++i) {
        auto spec = parse_dataset(doc.at("datasets")[i], data_dir, "config.datasets[" + std::to_string(i) + "]");
        if (!names.insert(spec.name).second) fail("config.datasets", "duplicate dataset name '" + spec.name + "'");
        cfg.datasets.push_back(std::move(spec));
    }

    if (!doc.contains("algorithms")) fail("config.algorithms", "required");
    const auto& algos = doc.at("algorithms");
    if (algos.is_string() && algos.get<std::string>() == "all") {
        for (auto a : all_algorithms) cfg.algorithms.push_back(parse_algorithm_entry(json(std::string(algorithm_id(a))), "config"));
    } else if (algos.is_array()) {
        std::set<std::string> ids;
        for (std::size_t i = 0; i < algos.size(); ++i) {
            auto spec = parse_algorithm_entry(algos[i], "config.algorithms[" + std::to_string(i) + "]");
            if (!ids.insert(std::string(algorithm_id(spec.algorithm))).second) {
                fail("config.algorithms", "algorithm '" + std::string(algorithm_id(spec.algorithm)) + "' listed twice");
            }
            cfg.algorithms.push_back(std::move(spec));
        }
    } else {
        fail("config.algorithms", "expected a list or \"all\"");
    }
    if (cfg.algorithms.empty()) fail("config.algorithms", "at least one algorithm is required");

    cfg.repetitions = get_count(doc, "repetitions", 1, "config");
    if (cfg.repetitions < 1) fail("config.repetitions", "must be >= 1");
    cfg.base_seed = get_or<std::uint64_t>(doc, "base_seed", 0, "config");
    cfg.output_dir = get_or<std::string>(doc, "output_dir", "bench_out", "config");

    if (doc.contains("emit")) {
        cfg.emit = {false, false, false};
        for (const auto& e : doc.at("emit")) {
            const auto name = e.is_string() ? e.get<std::string>() : "";
            if (name == "json") cfg.emit.json = true;
            else if (name == "csv") cfg.emit.csv = true;
            else if (name == "plot_data") cfg.emit.plot_data = true;
            else fail("config.emit", "unknown format '" + name + "'");
        }
    }
    const auto mapping = get_or<std::string>(doc, "mapping", "optimal", "config");
    if (mapping == "optimal") cfg.mapping = MappingMode::optimal;
    else if (mapping == "majority") cfg.mapping = MappingMode::majority;
    else fail("config.mapping", "expected 'optimal' or 'majority'");
    return cfg;
}

BenchConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

bool CellFilter::accepts(const std::string& dataset, const std::string& algorithm) const {
    return (datasets.empty() || datasets.contains(dataset)) && (algorithms.empty() || algorithms.contains(algorithm));
}

void parse_filter(const std::string& text, CellFilter& filter) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("filter item '" + item + "' is not key=value");
        const auto key = item.substr(0, eq);
        const auto value = item.substr(eq + 1);
        if (key == "dataset") filter.datasets.insert(value);
        else if (key == "algo" || key == "algorithm") filter.algorithms.insert(value);
        else throw ConfigError("unknown filter key '" + key + "'");
    }
}

std::size_t BenchReport::failed_cells() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.ok; }));
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t dataset_pos, std::size_t algorithm_pos,
                        std::size_t repetition, std::size_t algorithm_count, std::size_t repetitions) {
    const std::uint64_t cell = (static_cast<std::uint64_t>(dataset_pos) * algorithm_count + algorithm_pos) * repetitions +
                               repetition;
    return split_seed(base_seed, cell);
}

BenchReport run_grid(const BenchConfig& config, const GridOptions& options) {
    if (config.algorithms.empty()) throw ConfigError("config.algorithms: at least one algorithm is required");

    BenchReport report;
    report.config = config.source;

    std::vector<std::optional<Dataset>> loaded(config.datasets.size());
    for (std::size_t i = 0; i < config.datasets.size(); ++i) {
        const auto& spec = config.datasets[i];
        bool wanted = false;
        for (const auto& a : config.algorithms) wanted |= options.filter.accepts(spec.name, std::string(algorithm_id(a.algorithm)));
        if (!wanted) continue;
        try {
            auto ld = load_dataset(spec);
            if (ld.normalization) report.normalization.emplace(spec.name, *ld.normalization);
            loaded[i] = std::move(ld.dataset);
        } catch (const Error& e) {
            throw ConfigError("dataset '" + spec.name + "': " + e.what());
        }
        for (const auto& a : config.algorithms) {
            if (requires_k(a, *loaded[i]) && !needed_k(a, *loaded[i])) {
                throw ConfigError("algorithm '" + std::string(algorithm_id(a.algorithm)) + "' needs k but dataset '" +
                                  spec.name + "' has no labels or expected k; set \"k\" in the algorithm entry");
            }
        }
    }

    struct Cell {
        std::size_t dataset;
        std::size_t algorithm;
        std::size_t repetition;
    };
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            if (!options.filter.accepts(config.datasets[d].name, std::string(algorithm_id(config.algorithms[a].algorithm)))) {
                continue;
            }
            for (std::size_t r = 0; r < config.repetitions; ++r) cells.push_back({d, a, r});
        }
    }

    report.records.resize(cells.size());
    auto run_cell = [&](std::size_t index) {
        const auto& cell = cells[index];
        const auto& dataset = *loaded[cell.dataset];
        const auto& spec = config.algorithms[cell.algorithm];
        CellRecord rec;
        rec.dataset = config.datasets[cell.dataset].name;
        rec.algorithm = std::string(algorithm_id(spec.algorithm));
        rec.repetition = cell.repetition;
        rec.seed = cell_seed(config.base_seed, cell.dataset, cell.algorithm, cell.repetition, config.algorithms.size(),
                             config.repetitions);
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto params = resolve_params(spec, dataset);
            const auto outcome = run_algorithm(spec.algorithm, dataset, params, rec.seed);
            const auto& conv = spec.pso.convergence;
            const auto eval = evaluate(dataset, outcome.centroids, outcome.assignment, outcome.sicd_trace, conv.rel_tol,
                                       conv.stall_iters, config.mapping);
            rec.k = outcome.k;
            rec.sicd = outcome.sicd;
            if (eval.error) rec.error_percent = eval.error->percent;
            rec.iterations = outcome.iterations_used;
            // Lloyd stops on its own once assignments settle.
            rec.iterations_to_converge =
                spec.algorithm == Algorithm::kmeans ? outcome.iterations_used : eval.iterations_to_converge;
            rec.trace = outcome.sicd_trace;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.message = e.what();
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        report.records[index] = std::move(rec);
    };

    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(cells.size(), 1));
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
            });
        }
    }

    report.aggregates = compute_aggregates(report.records);
    return report;
}

std::vector<Aggregate> compute_aggregates(const std::vector<CellRecord>& records) {
    std::vector<Aggregate> out;
    std::map<std::pair<std::string, std::string>, std::size_t> slot;
    std::vector<std::vector<const CellRecord*>> groups;
    for (const auto& r : records) {
        auto [it, inserted] = slot.try_emplace({r.dataset, r.algorithm}, groups.size());
        if (inserted) {
            groups.emplace_back();
            Aggregate agg;
            agg.dataset = r.dataset;
            agg.algorithm = r.algorithm;
            out.push_back(std::move(agg));
        }
        if (r.ok) groups[it->second].push_back(&r);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto& agg = out[g];
        const auto& rs = groups[g];
        agg.runs = rs.size();
        if (rs.empty()) continue;
        const double n = static_cast<double>(rs.size());
        double sum = 0.0, iters = 0.0, conv = 0.0, err = 0.0;
        std::size_t with_error = 0;
        agg.sicd_best = rs.front()->sicd;
        agg.sicd_worst = rs.front()->sicd;
        for (const auto* r : rs) {
            sum += r->sicd;
            iters += static_cast<double>(r->iterations);
            conv += static_cast<double>(r->iterations_to_converge);
            agg.sicd_best = std::min(agg.sicd_best, r->sicd);
            agg.sicd_worst = std::max(agg.sicd_worst, r->sicd);
            if (r->error_percent) {
                err += *r->error_percent;
                ++with_error;
            }
        }
        agg.sicd_mean = sum / n;
        double sq = 0.0;
        for (const auto* r : rs) sq += (r->sicd - agg.sicd_mean) * (r->sicd - agg.sicd_mean);
        agg.sicd_std = rs.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
        agg.iterations_mean = iters / n;
        agg.iterations_to_converge_mean = conv / n;
        if (with_error == rs.size()) agg.error_mean = err / n;
    }
    return out;
}

json report_to_json(const BenchReport& report) {
    json doc;
    doc["schema_version"] = report.schema;
    doc["versions"] = {{"swarmclust", library_version}, {"defaults_version", defaults_version}};
    doc["config"] = report.config;
    json norm = json::object();
    for (const auto& [name, rec] : report.normalization) norm[name] = normalization_to_json(rec);
    doc["normalization"] = norm;

    json records = json::array();
    for (const auto& r : report.records) {
        json j = {{"dataset", r.dataset},
                  {"algorithm", r.algorithm},
                  {"repetition", r.repetition},
                  {"seed", r.seed},
                  {"status", r.ok ? "ok" : "failed"},
                  {"k", r.k},
                  {"sicd", r.sicd},
                  {"error_percent", r.error_percent ? json(*r.error_percent) : json(nullptr)},
                  {"iterations", r.iterations},
                  {"iterations_to_converge", r.iterations_to_converge},
                  {"wall_ms", r.wall_ms},
                  {"trace", r.trace}};
        if (!r.ok) j["message"] = r.message;
        records.push_back(std::move(j));
    }
    doc["records"] = std::move(records);

    json aggs = json::array();
    for (const auto& a : report.aggregates) {
        aggs.push_back({{"dataset", a.dataset},
                        {"algorithm", a.algorithm},
                        {"runs", a.runs},
                        {"sicd_mean", a.sicd_mean},
                        {"sicd_std", a.sicd_std},
                        {"sicd_best", a.sicd_best},
                        {"sicd_worst", a.sicd_worst},
                        {"error_mean", a.error_mean ? json(*a.error_mean) : json(nullptr)},
                        {"iterations_mean", a.iterations_mean},
                        {"iterations_to_converge_mean", a.iterations_to_converge_mean}});
    }
    doc["aggregates"] = std::move(aggs);
    return doc;
}

BenchReport report_from_json(const json& doc) {
    BenchReport report;
    report.schema = doc.at("schema_version").get<int>();
    if (report.schema != schema_version) throw ConfigError("unsupported report schema_version");
    report.config = doc.at("config");
    for (const auto& [name, rec] : doc.at("normalization").items()) {
        report.normalization.emplace(name, normalization_from_json(rec));
    }
    auto opt_double = [](const json& j) { return j.is_null() ? std::optional<double>{} : j.get<double>(); };
    for (const auto& j : doc.at("records")) {
        CellRecord r;
        r.dataset = j.at("dataset").get<std::string>();
        r.algorithm = j.at("algorithm").get<std::string>();
        r.repetition = j.at("repetition").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.ok = j.at("status").get<std::string>() == "ok";
        r.message = j.value("message", "");
        r.k = j.at("k").get<std::size_t>();
        r.sicd = j.at("sicd").get<double>();
        r.error_percent = opt_double(j.at("error_percent"));
        r.iterations = j.at("iterations").get<std::size_t>();
        r.iterations_to_converge = j.at("iterations_to_converge").get<std::size_t>();
        r.wall_ms = j.at("wall_ms").get<double>();
        r.trace = j.at("trace").get<std::vector<double>>();
        report.records.push_back(std::move(r));
    }
    for (const auto& j : doc.at("aggregates")) {
        Aggregate a;
        a.dataset = j.at("dataset").get<std::string>();
        a.algorithm = j.at("algorithm").get<std::string>();
        a.runs = j.at("runs").get<std::size_t>();
        a.sicd_mean = j.at("sicd_mean").get<double>();
        a.sicd_std = j.at("sicd_std").get<double>();
        a.sicd_best = j.at("sicd_best").get<double>();
        a.sicd_worst = j.at("sicd_worst").get<double>();
        a.error_mean = opt_double(j.at("error_mean"));
        a.iterations_mean = j.at("iterations_mean").get<double>();
        a.iterations_to_converge_mean = j.at("iterations_to_converge_mean").get<double>();
        report.aggregates.push_back(std::move(a));
    }
    return report;
}

std::string records_csv(const BenchReport& report) {
    std::string out =
        "dataset,algorithm,repetition,seed,status,k,sicd,error_percent,iterations,iterations_to_converge,wall_ms,message\n";
    for (const auto& r : report.records) {
        out += csv_field(r.dataset) + ',' + csv_field(r.algorithm) + ',' + std::to_string(r.repetition) + ',' +
               std::to_string(r.seed) + ',' + (r.ok ? "ok" : "failed") + ',' + std::to_string(r.k) + ',' +
               format_double(r.sicd) + ',' + (r.error_percent ? format_double(*r.error_percent) : "") + ',' +
               std::to_string(r.iterations) + ',' + std::to_string(r.iterations_to_converge) + ',' +
               format_double(r.wall_ms) + ',' + csv_field(r.message) + '\n';
    }
    return out;
}

std::string plot_data_csv(const BenchReport& report) {
    std::string out = "dataset,algorithm,repetition,seed,iteration,sicd\n";
    for (const auto& r : report.records) {
        const std::string prefix = csv_field(r.dataset) + ',' + csv_field(r.algorithm) + ',' +
                                   std::to_string(r.repetition) + ',' + std::to_string(r.seed) + ',';
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            out += prefix + std::to_string(i) + ',' + format_double(r.trace[i]) + '\n';
        }
    }
    return out;
}

std::vector<std::filesystem::path> emit_report(const BenchReport& report, const std::filesystem::path& dir,
                                               const EmitFormats& formats) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    if (formats.json) {
        written.push_back(dir / "report.json");
        write_atomically(written.back(), report_to_json(report).dump(2) + "\n");
    }
    if (formats.csv) {
        written.push_back(dir / "records.csv");
        write_atomically(written.back(), records_csv(report));
    }
    if (formats.plot_data) {
        written.push_back(dir / "plot_data.csv");
        write_atomically(written.back(), plot_data_csv(report));
    }
    return written;
}

}  // namespace swarmclust::bench
