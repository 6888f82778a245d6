// bench: runs (algorithm x dataset x repetition) clustering grids.
//
// Exit codes: 0 success, 1 one or more cells failed, 2 config or load error.
// SWARMCLUST_OUT_DIR and SWARMCLUST_JOBS override the output directory and
// worker count when the matching flag is not given.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "swarmclust/bench.hpp"

namespace sc = swarmclust;
namespace bench = swarmclust::bench;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_cell_failures = 1;
constexpr int exit_config_error = 2;

std::size_t default_jobs() {
    if (const char* env = std::getenv("SWARMCLUST_JOBS"); env && *env) {
        try {
            const auto n = std::stoul(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid SWARMCLUST_JOBS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int validate(const std::string& config_path) {
    const auto config = bench::load_config(config_path);
    std::size_t cells = 0;
    for (const auto& spec : config.datasets) {
        const auto loaded = sc::load_dataset(spec);
        std::cout << "dataset " << spec.name << ": n=" << loaded.dataset.size() << " d=" << loaded.dataset.dims();
        if (loaded.dataset.k_true()) std::cout << " k=" << *loaded.dataset.k_true();
        std::cout << (loaded.normalization ? " (normalized)" : "") << "\n";
        cells += config.algorithms.size() * config.repetitions;
    }
    std::cout << "algorithms:";
    for (const auto& a : config.algorithms) std::cout << ' ' << sc::algorithm_id(a.algorithm);
    std::cout << "\nrepetitions: " << config.repetitions << "\ncells: " << cells << "\nconfig OK\n";
    return exit_ok;
}

int run(const std::string& config_path, const std::string& out_dir, std::size_t jobs,
        const std::vector<std::string>& filters, bool dry_run) {
    if (dry_run) return validate(config_path);
    const auto config = bench::load_config(config_path);
    bench::GridOptions options;
    options.jobs = jobs;
    for (const auto& f : filters) bench::parse_filter(f, options.filter);

    std::filesystem::path dir = config.output_dir;
    if (!out_dir.empty()) {
        dir = out_dir;
    } else if (const char* env = std::getenv("SWARMCLUST_OUT_DIR"); env && *env) {
        dir = env;
    }

    const auto report = bench::run_grid(config, options);
    for (const auto& path : bench::emit_report(report, dir, config.emit)) std::cout << "wrote " << path.string() << "\n";

    for (const auto& a : report.aggregates) {
        std::cout << a.dataset << " / " << a.algorithm << ": runs=" << a.runs << " sicd_mean=" << a.sicd_mean
                  << " sicd_best=" << a.sicd_best;
        if (a.error_mean) std::cout << " error_mean=" << *a.error_mean << "%";
        std::cout << " iters_to_converge=" << a.iterations_to_converge_mean << "\n";
    }
    const auto failed = report.failed_cells();
    if (failed > 0) {
        for (const auto& r : report.records) {
            if (!r.ok) std::cerr << "cell failed: " << r.dataset << "/" << r.algorithm << "#" << r.repetition << ": " << r.message << "\n";
        }
        return exit_cell_failures;
    }
    return exit_ok;
}

int list_datasets() {
    const auto dir = sc::default_data_dir();
    std::cout << "data directory: " << dir.string() << "\n";
    for (const auto& e : sc::dataset_registry()) {
        const bool present = std::filesystem::exists(dir / e.file);
        std::cout << e.name << "\tn=" << e.expected.n << " d=" << e.expected.d << " k=" << e.expected.k << "\t"
                  << (present ? "present" : "missing") << "\t" << e.description << "\n";
    }
    std::cout << "synthetic kinds: two_blob grid art_like\n";
    return exit_ok;
}

int list_algorithms() {
    for (auto a : sc::all_algorithms) std::cout << sc::algorithm_id(a) << "\t" << sc::algorithm_description(a) << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::size_t jobs = 0;
    std::vector<std::string> filters;
    bool dry_run = false;

    auto* run_cmd = app.add_subcommand("run", "Run a benchmark grid");
    run_cmd->add_option("--config", config_path, "Config file (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
    run_cmd->add_option("--jobs", jobs, "Worker threads (default: logical cores)");
    run_cmd->add_option("--filter", filters, "Restrict cells, e.g. dataset=iris,algo=pso");
    run_cmd->add_flag("--validate", dry_run, "Validate the config and datasets, run nothing");

    auto* validate_cmd = app.add_subcommand("validate", "Validate a config file and load its datasets");
    validate_cmd->add_option("--config", config_path, "Config file (JSON)")->required();

    app.add_subcommand("list-datasets", "List registry datasets");
    app.add_subcommand("list-algorithms", "List algorithm ids");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run(config_path, out_dir, jobs ? jobs : default_jobs(), filters, dry_run);
        if (*validate_cmd) return validate(config_path);
        if (app.got_subcommand("list-datasets")) return list_datasets();
        if (app.got_subcommand("list-algorithms")) return list_algorithms();
    } catch (const sc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
    return exit_ok;
}
