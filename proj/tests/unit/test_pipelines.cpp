#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmclust/data.hpp"
#include "swarmclust/metrics.hpp"
#include "swarmclust/pipelines.hpp"

using namespace swarmclust;

namespace {

Dataset two_blobs(std::uint64_t seed, std::size_t n = 20) {
    BlobParams p;
    p.n = n;
    return make_blobs(BlobKind::two_blob, p, seed);
}

PsoConfig quick(Algorithm a) {
    auto cfg = default_pso_config(a);
    cfg.max_iter = 60;
    return cfg;
}

}  // namespace

TEST_CASE("algorithm ids round-trip") {
    for (auto a : all_algorithms) CHECK(parse_algorithm(algorithm_id(a)) == a);
    CHECK_FALSE(parse_algorithm("nope"));
}

TEST_CASE("assign_nearest") {
    const auto pts = Matrix::from_rows({{0, 0}, {1, 0}, {5, 5}});
    CHECK(assign_nearest(pts, Matrix::from_rows({{9, 9}})).cluster_of == std::vector<std::size_t>{0, 0, 0});
    // (1,0) is equidistant from centroids 0 and 2.
    const auto tie = assign_nearest(Matrix::from_rows({{1, 0}}), Matrix::from_rows({{0, 0}, {5, 5}, {2, 0}}));
    CHECK(tie.cluster_of[0] == 0);

    Rng gen(4);
    for (int t = 0; t < 40; ++t) {
        Matrix x(6, 2), c(2, 2);
        for (auto& v : x.values()) v = gen.normal();
        for (auto& v : c.values()) v = gen.normal();
        CHECK(assign_nearest(x, c).cluster_of == oracle::nearest(oracle::to_points(x), oracle::to_points(c)));
    }
}

TEST_CASE("recompute_centroids") {
    const auto pts = Matrix::from_rows({{0, 0}, {2, 2}, {5, 1}});
    SUBCASE("singletons") {
        const auto r = recompute_centroids(pts, Assignment{{0, 1, 2}, 3});
        CHECK(r.centroids == pts);
    }
    SUBCASE("mean") {
        const auto r = recompute_centroids(pts, Assignment{{0, 0, 1}, 2});
        CHECK(r.centroids == Matrix::from_rows({{1, 1}, {5, 1}}));
        CHECK(r.assignment.cluster_of == std::vector<std::size_t>{0, 0, 1});
    }
    SUBCASE("empty cluster takes the farther point") {
        const auto two = Matrix::from_rows({{0.0}, {1.0}});
        const auto reference = Matrix::from_rows({{0.1}, {9.0}});
        const auto a = assign_nearest(two, reference);
        REQUIRE(a.cluster_of == std::vector<std::size_t>{0, 0});
        const auto r = recompute_centroids(two, a, reference);
        CHECK(r.centroids == Matrix::from_rows({{0.0}, {1.0}}));
        CHECK(r.assignment.cluster_of == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("repair leaves no cluster empty") {
        Rng gen(6);
        for (int t = 0; t < 50; ++t) {
            const std::size_t n = 3 + gen.below(10), k = 2 + gen.below(std::min<std::size_t>(n - 1, 4));
            Matrix x(n, 2);
            for (auto& v : x.values()) v = gen.normal();
            std::vector<std::size_t> cl(n, 0);
            for (std::size_t i = 0; i < n; ++i) cl[i] = gen.below(2);
            const auto r = recompute_centroids(x, Assignment{cl, k});
            for (auto s : r.assignment.cluster_sizes()) CHECK(s >= 1);
        }
    }
}

TEST_CASE("clustering_fitness equals sicd of the nearest partition") {
    Rng gen(9);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + gen.below(30), d = 1 + gen.below(4), k = 1 + gen.below(4);
        Matrix x(n, d);
        for (auto& v : x.values()) v = gen.uniform01();
        std::vector<double> pos(k * d);
        for (auto& v : pos) v = gen.uniform01();
        const auto c = decode(pos, k, d);
        CHECK(clustering_fitness(x, k, pos) == sicd(c, assign_nearest(x, c), x));
    }
}

TEST_CASE("run_kmeans") {
    SUBCASE("k = N gives zero SICD") {
        const Dataset ds("d", Matrix::from_rows({{0, 0}, {3, 1}, {7, 2}}));
        CHECK(run_kmeans(ds, 3, RandomPoints{}, 1).sicd == 0.0);
    }
    SUBCASE("two pairs converge in one iteration") {
        const Dataset ds("d", Matrix::from_rows({{0, 0}, {0, 2}, {10, 0}, {10, 2}}));
        const auto out = run_kmeans(ds, 2, Matrix::from_rows({{0, 0}, {10, 0}}), 0);
        CHECK(out.iterations_used == 1);
        CHECK(out.sicd == doctest::Approx(4.0));
        CHECK(out.centroids == Matrix::from_rows({{0, 1}, {10, 1}}));
    }
    SUBCASE("k > N is rejected") {
        const Dataset ds("d", Matrix::from_rows({{0.0}, {1.0}}));
        CHECK_THROWS_AS(run_kmeans(ds, 3, RandomPoints{}, 0), DegenerateInputError);
    }
    SUBCASE("global optimum bounds the result on 8 points") {
        Rng gen(21);
        for (int t = 0; t < 5; ++t) {
            Matrix x(8, 2);
            for (auto& v : x.values()) v = gen.normal();
            const Dataset ds("r", x);
            const double best = oracle::optimal_sicd(oracle::to_points(x), 2);
            for (std::uint64_t s = 0; s < 5; ++s) {
                const auto out = run_kmeans(ds, 2, RandomPoints{}, s);
                CHECK(best <= out.sicd + 1e-9);
                for (std::size_t i = 1; i < out.sicd_trace.size(); ++i) CHECK(out.sicd_trace[i] <= out.sicd_trace[i - 1]);
            }
        }
    }
}

TEST_CASE("outcomes are self-consistent and reproducible") {
    const auto ds = two_blobs(3);
    AlgorithmParams params;
    params.k = 2;
    for (auto a : all_algorithms) {
        CAPTURE(algorithm_id(a));
        params.pso = quick(a);
        const auto first = run_algorithm(a, ds, params, 42);
        const auto again = run_algorithm(a, ds, params, 42);
        CHECK(first.centroids == again.centroids);
        CHECK(first.sicd_trace == again.sicd_trace);
        CHECK(first.assignment == assign_nearest(ds.points(), first.centroids));
        CHECK(first.sicd == sicd(first.centroids, first.assignment, ds.points()));
        CHECK(first.k == first.centroids.rows());
        if (a != Algorithm::kmeans) CHECK(first.sicd == first.sicd_trace.back());
    }
}

TEST_CASE("algorithms that need k say so") {
    const auto ds = two_blobs(1);
    AlgorithmParams params;
    CHECK_THROWS_AS(run_algorithm(Algorithm::pso, ds, params, 0), ContractError);
    CHECK_NOTHROW(run_algorithm(Algorithm::sc_br_apso, ds, params, 0));
}

TEST_CASE("sc_br_apso on a single point") {
    const Dataset ds("one", Matrix::from_rows({{0.3, 0.7}}));
    const auto out = run_sc_br_apso(ds, default_subtractive_config(), default_pso_config(Algorithm::sc_br_apso), 5);
    CHECK(out.k == 1);
    CHECK(out.centroids == Matrix::from_rows({{0.3, 0.7}}));
    CHECK(out.sicd == 0.0);
}

TEST_CASE("sc_br_apso finds both blobs and beats unseeded pso") {
    int wins = 0;
    const int seeds = 50;
    const auto ds = two_blobs(7);
    for (int s = 0; s < seeds; ++s) {
        const auto sc = run_sc_br_apso(ds, default_subtractive_config(), default_pso_config(Algorithm::sc_br_apso), s);
        REQUIRE(sc.k == 2);
        const auto plain = run_pso(ds, 2, default_pso_config(Algorithm::pso), s);
        if (sc.sicd <= plain.sicd) ++wins;
    }
    CHECK(wins >= seeds * 8 / 10);
}

TEST_CASE("default configs validate") {
    for (auto a : all_algorithms) CHECK_NOTHROW(default_pso_config(a).validate());
    CHECK_NOTHROW(default_subtractive_config().validate());
}
