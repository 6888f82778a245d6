#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmclust/data.hpp"
#include "swarmclust/subtractive.hpp"

using namespace swarmclust;

namespace {

Dataset line3() { return Dataset("line", Matrix::from_rows({{0}, {1}, {2}})); }

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t d) {
    Matrix m(n, d);
    for (auto& v : m.values()) v = rng.uniform01();
    return Dataset("random", m);
}

}  // namespace

TEST_CASE("density_initial examples") {
    CHECK(density_initial(Matrix::from_rows({{3.0, 4.0}}), 0.7) == std::vector<double>{1.0});
    CHECK(density_initial(Matrix::from_rows({{1.0}, {1.0}}), 0.5) == std::vector<double>{2.0, 2.0});

    // r_a = 2 makes (r_a/2)^2 = 1: D = (1 + e^-1 + e^-4, 1 + 2e^-1, 1 + e^-1 + e^-4).
    const auto d = density_initial(line3().points(), 2.0);
    const double end = 1 + std::exp(-1.0) + std::exp(-4.0);
    const double mid = 1 + 2 * std::exp(-1.0);
    CHECK(d[0] == doctest::Approx(end).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(mid).epsilon(1e-14));
    CHECK(d[2] == doctest::Approx(end).epsilon(1e-14));
    CHECK(d[0] == doctest::Approx(1.3862).epsilon(1e-4));
    CHECK(d[1] == doctest::Approx(1.7358).epsilon(1e-4));
    CHECK_THROWS_AS(density_initial(line3().points(), 0.0), ContractError);
}

TEST_CASE("density_initial performs N^2 kernel evaluations and stays in [1, N]") {
    Rng rng(21);
    for (std::size_t n : {1u, 2u, 7u, 30u}) {
        auto ds = random_dataset(rng, n, 3);
        std::size_t evals = 0;
        const auto d = density_initial(ds.points(), 0.5, &evals);
        CHECK(evals == n * n);
        for (double v : d) {
            CHECK(v >= 1.0);
            CHECK(v <= static_cast<double>(n) + 1e-12);
        }
    }
}

TEST_CASE("density_revise examples") {
    const auto pts = line3().points();
    const auto d = density_initial(pts, 2.0);
    const auto r = density_revise(d, 1, d[1], pts, 3.0);
    CHECK(r[1] == 0.0);
    const double expected = (1 + std::exp(-1.0) + std::exp(-4.0)) - (1 + 2 * std::exp(-1.0)) * std::exp(-1.0 / 2.25);
    CHECK(r[0] == doctest::Approx(expected).epsilon(1e-13));
    CHECK(r[0] == doctest::Approx(0.2733).epsilon(1e-3));
    CHECK(r[2] == doctest::Approx(expected).epsilon(1e-13));

    // A far-away point keeps its density.
    const auto far = Matrix::from_rows({{0.0}, {1e6}});
    const auto fd = density_initial(far, 1.0);
    const auto fr = density_revise(fd, 0, fd[0], far, 1.5);
    CHECK(fr[1] == fd[1]);
    CHECK(fr[0] == 0.0);

    CHECK_THROWS_AS(density_revise(d, 5, 1.0, pts, 1.0), ContractError);
}

TEST_CASE("select_centers trivial cases") {
    Dataset one("one", Matrix::from_rows({{4.0, 2.0}}));
    SubtractiveConfig cfg;
    cfg.stop_rule = FixedK{1};
    const auto res = select_centers(one, cfg);
    CHECK(res.k == 1);
    CHECK(res.centers == one.points());
    CHECK(res.first_peak_density == 1.0);

    cfg.stop_rule = FixedK{2};
    CHECK_THROWS_AS(select_centers(one, cfg), DegenerateInputError);

    cfg.stop_rule = DensityRatio{1.5};
    CHECK_THROWS_AS(select_centers(one, cfg), ContractError);
    cfg.stop_rule = DensityRatio{0.15};
    cfg.r_a = -1;
    CHECK_THROWS_AS(select_centers(one, cfg), ContractError);
}

TEST_CASE("select_centers finds both well separated blobs") {
    // Blob diameter << r_a << separation.
    Matrix m(10, 2);
    Rng rng(4);
    for (std::size_t i = 0; i < 10; ++i) {
        m(i, 0) = (i < 5 ? 0.0 : 10.0) + 0.01 * rng.uniform01();
        m(i, 1) = 0.01 * rng.uniform01();
    }
    Dataset ds("blobs", m);
    SubtractiveConfig cfg;
    cfg.r_a = 1.0;
    cfg.stop_rule = DensityRatio{0.5};
    const auto res = select_centers(ds, cfg);
    REQUIRE(res.k == 2);
    const bool first_left = res.indices[0] < 5;
    CHECK(first_left != (res.indices[1] < 5));

    const auto ref = oracle::select(oracle::to_points(m), 1.0, 1.5, 0, 0.5, cfg.max_centers);
    CHECK(ref.indices == res.indices);
}

TEST_CASE("select_centers matches the brute-force replay on random small datasets") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(30);
        const std::size_t d = 1 + rng.below(4);
        auto ds = random_dataset(rng, n, d);
        SubtractiveConfig cfg;
        cfg.r_a = 0.2 + rng.uniform01();
        const bool fixed = trial % 2 == 0;
        const std::size_t k = 1 + rng.below(n);
        cfg.stop_rule = fixed ? StopRule{FixedK{k}} : StopRule{DensityRatio{0.05 + 0.9 * rng.uniform01()}};
        const double eps = fixed ? 0.0 : std::get<DensityRatio>(cfg.stop_rule).epsilon;
        const auto res = select_centers(ds, cfg);
        const auto ref = oracle::select(oracle::to_points(ds.points()), cfg.r_a, 1.5 * cfg.r_a, fixed ? k : 0, eps,
                                        cfg.max_centers);
        REQUIRE(res.indices == ref.indices);
        for (std::size_t c = 0; c < res.k; ++c) {
            CHECK(res.densities_at_selection[c] == doctest::Approx(ref.peaks[c]).epsilon(1e-9));
        }
        if (fixed) CHECK(res.k == k);
        // Deterministic.
        CHECK(select_centers(ds, cfg).indices == res.indices);
    }
}

TEST_CASE("densities at selection never increase while peaks stay positive") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto ds = random_dataset(rng, 5 + rng.below(25), 2);
        SubtractiveConfig cfg;
        cfg.r_a = 0.3 + 0.5 * rng.uniform01();
        cfg.stop_rule = DensityRatio{0.05};
        const auto res = select_centers(ds, cfg);
        for (std::size_t c = 1; c < res.k; ++c) {
            CHECK(res.densities_at_selection[c] <= res.densities_at_selection[c - 1]);
        }
        CHECK(res.densities_at_selection.front() == res.first_peak_density);
    }
}

TEST_CASE("explicit r_b overrides the 1.5 r_a default") {
    SubtractiveConfig cfg;
    cfg.r_a = 0.4;
    CHECK(cfg.suppression_radius() == doctest::Approx(0.6));
    cfg.r_b = 1.0;
    CHECK(cfg.suppression_radius() == 1.0);
}
