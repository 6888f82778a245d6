// Python bindings: numpy arrays in and out, plain dicts for results.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "swarmclust/bench.hpp"
#include "swarmclust/data.hpp"
#include "swarmclust/metrics.hpp"
#include "swarmclust/pipelines.hpp"
#include "swarmclust/subtractive.hpp"

namespace py = pybind11;
namespace sc = swarmclust;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IndexArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

sc::Matrix to_matrix(const DoubleArray& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array of points");
    sc::Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.values().begin());
    return m;
}

py::array_t<double> to_array(const sc::Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::optional<std::vector<int>> to_labels(const std::optional<IndexArray>& labels) {
    if (!labels) return std::nullopt;
    return std::vector<int>(labels->data(), labels->data() + labels->size());
}

sc::Dataset make_dataset(const DoubleArray& points, const std::optional<IndexArray>& labels) {
    return sc::Dataset("array", to_matrix(points), to_labels(labels));
}

sc::Assignment to_assignment(const IndexArray& clusters, std::size_t k) {
    sc::Assignment a;
    a.k = k;
    for (py::ssize_t i = 0; i < clusters.size(); ++i) {
        const auto c = clusters.data()[i];
        if (c < 0 || static_cast<std::size_t>(c) >= k) throw py::value_error("cluster id out of range");
        a.cluster_of.push_back(static_cast<std::size_t>(c));
    }
    return a;
}

sc::SubtractiveConfig subtractive_config(double r_a, std::optional<double> r_b, std::optional<std::size_t> k,
                                         double epsilon) {
    sc::SubtractiveConfig cfg = sc::default_subtractive_config();
    cfg.r_a = r_a;
    cfg.r_b = r_b;
    if (k) cfg.stop_rule = sc::FixedK{*k};
    else cfg.stop_rule = sc::DensityRatio{epsilon};
    return cfg;
}

sc::Algorithm algorithm_from(const std::string& id) {
    const auto a = sc::parse_algorithm(id);
    if (!a) throw py::value_error("unknown algorithm '" + id + "'");
    return *a;
}

sc::MappingMode mapping_from(const std::string& mode) {
    if (mode == "optimal") return sc::MappingMode::optimal;
    if (mode == "majority") return sc::MappingMode::majority;
    throw py::value_error("mapping must be 'optimal' or 'majority'");
}

}  // namespace

PYBIND11_MODULE(_swarmclust, m) {
    m.doc() = "Swarm-based clustering: subtractive seeding, PSO variants, metrics and the benchmark grid";

    // Later registrations are tried first, so the base class goes first.
    auto base = py::register_exception<sc::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<sc::ContractError>(m, "ContractError", base.ptr());
    py::register_exception<sc::DegenerateInputError>(m, "DegenerateInputError", base.ptr());
    py::register_exception<sc::UnsupportedEvaluationError>(m, "UnsupportedEvaluationError", base.ptr());

    m.def("algorithms", [] {
        std::vector<std::string> ids;
        for (auto a : sc::all_algorithms) ids.emplace_back(sc::algorithm_id(a));
        return ids;
    });

    m.def(
        "density_initial",
        [](const DoubleArray& points, double r_a) { return to_array(sc::density_initial(to_matrix(points), r_a)); },
        py::arg("points"), py::arg("r_a"));

    m.def(
        "select_centers",
        [](const DoubleArray& points, double r_a, std::optional<double> r_b, std::optional<std::size_t> k,
           double epsilon) {
            const auto res = sc::select_centers(make_dataset(points, std::nullopt), subtractive_config(r_a, r_b, k, epsilon));
            std::vector<std::int64_t> idx(res.indices.begin(), res.indices.end());
            py::dict out;
            out["centers"] = to_array(res.centers);
            out["indices"] = to_array(idx);
            out["k"] = res.k;
            out["densities"] = to_array(res.densities_at_selection);
            return out;
        },
        py::arg("points"), py::arg("r_a") = 0.5, py::arg("r_b") = py::none(), py::arg("k") = py::none(),
        py::arg("epsilon") = 0.15);

    m.def(
        "run",
        [](const std::string& algorithm, const DoubleArray& points, std::optional<std::size_t> k, std::uint64_t seed,
           double r_a, std::optional<std::size_t> max_iter, std::optional<std::size_t> swarm_size) {
            const auto alg = algorithm_from(algorithm);
            sc::AlgorithmParams params;
            params.k = k;
            params.subtractive = subtractive_config(r_a, std::nullopt, k, 0.15);
            auto pso = sc::default_pso_config(alg);
            if (max_iter) pso.max_iter = *max_iter;
            if (swarm_size) pso.swarm_size = *swarm_size;
            params.pso = pso;
            if (max_iter) params.kmeans_max_iter = *max_iter;
            sc::ClusteringOutcome res;
            {
                const auto ds = make_dataset(points, std::nullopt);
                py::gil_scoped_release release;
                res = sc::run_algorithm(alg, ds, params, seed);
            }
            std::vector<std::int64_t> clusters(res.assignment.cluster_of.begin(), res.assignment.cluster_of.end());
            py::dict out;
            out["centroids"] = to_array(res.centroids);
            out["assignment"] = to_array(clusters);
            out["sicd"] = res.sicd;
            out["k"] = res.k;
            out["iterations"] = res.iterations_used;
            out["trace"] = to_array(res.sicd_trace);
            return out;
        },
        py::arg("algorithm"), py::arg("points"), py::arg("k") = py::none(), py::arg("seed") = 0, py::arg("r_a") = 0.5,
        py::arg("max_iter") = py::none(), py::arg("swarm_size") = py::none(),
        "Run one clustering algorithm. k is required except for sub_pso and sc_br_apso, where it switches\n"
        "subtractive seeding from the density-ratio rule to a fixed count.");

    m.def(
        "sicd",
        [](const DoubleArray& centroids, const IndexArray& assignment, const DoubleArray& points) {
            const auto c = to_matrix(centroids);
            return sc::sicd(c, to_assignment(assignment, c.rows()), to_matrix(points));
        },
        py::arg("centroids"), py::arg("assignment"), py::arg("points"));

    m.def(
        "error_rate",
        [](const IndexArray& assignment, const IndexArray& labels, std::optional<std::size_t> k, const std::string& mode) {
            std::size_t clusters = 0;
            for (py::ssize_t i = 0; i < assignment.size(); ++i) {
                clusters = std::max(clusters, static_cast<std::size_t>(assignment.data()[i]) + 1);
            }
            const auto l = *to_labels(labels);
            const auto r = sc::error_rate(to_assignment(assignment, k.value_or(clusters)), l, mapping_from(mode));
            py::dict out;
            out["percent"] = r.percent;
            out["mapping"] = r.mapping;
            out["misplaced"] = r.misplaced;
            return out;
        },
        py::arg("assignment"), py::arg("labels"), py::arg("k") = py::none(), py::arg("mapping") = "optimal");

    m.def(
        "make_blobs",
        [](const std::string& kind, std::size_t n, double separation, double spread, std::size_t dims,
           std::size_t grid_side, std::uint64_t seed) {
            const auto k = sc::parse_blob_kind(kind);
            if (!k) throw py::value_error("unknown blob kind '" + kind + "'");
            const auto ds = sc::make_blobs(*k, sc::BlobParams{separation, spread, n, dims, grid_side}, seed);
            std::vector<std::int64_t> labels(ds.labels()->begin(), ds.labels()->end());
            return py::make_tuple(to_array(ds.points()), to_array(labels));
        },
        py::arg("kind") = "two_blob", py::arg("n") = 20, py::arg("separation") = 10.0, py::arg("spread") = 0.1,
        py::arg("dims") = 2, py::arg("grid_side") = 3, py::arg("seed") = 0);

    m.def(
        "run_bench",
        [](const std::string& config_json, std::size_t jobs) {
            const auto cfg = sc::bench::parse_config(nlohmann::json::parse(config_json));
            sc::bench::GridOptions opt;
            opt.jobs = jobs;
            sc::bench::BenchReport report;
            {
                py::gil_scoped_release release;
                report = sc::bench::run_grid(cfg, opt);
            }
            return sc::bench::report_to_json(report).dump();
        },
        py::arg("config_json"), py::arg("jobs") = 1, "Run a benchmark grid from a JSON config string; returns the report as JSON text.");

    m.attr("__version__") = sc::bench::library_version;
}
