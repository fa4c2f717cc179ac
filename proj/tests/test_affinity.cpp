#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spm/affinity.hpp"
#include "spm/errors.hpp"
#include "spm/instance.hpp"
#include "support/oracles.hpp"

using namespace spm;

namespace {
constexpr double pi = 3.14159265358979323846;

attributed_graph two_node_edge(const point_set& pts) {
    return compute_edge_attrs(pts, attributed_graph(2, {{0, 1}}));
}
} // namespace

TEST_CASE("affinity_matrix validates entries") {
    CHECK_THROWS_AS(affinity_matrix::from_entries(2, {{0, 1, -1.0}, {1, 0, -1.0}}),
                    invalid_argument);
    CHECK_THROWS_AS(affinity_matrix::from_entries(2, {{0, 17, 1.0}}), invalid_argument);
    CHECK_THROWS_AS(affinity_matrix::from_entries(2, {{0, 1, 1.0}}), invalid_argument); // asymmetric
    CHECK_THROWS_AS(affinity_matrix::from_entries(2, {{0, 1, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}}),
                    invalid_argument); // duplicate key
    const auto w = affinity_matrix::from_entries(2, {{0, 1, 0.5}, {1, 0, 0.5}, {2, 3, 0.0}});
    CHECK(w.nnz() == 2); // zero dropped
    CHECK(w.value_at(0, 1) == 0.5);
    CHECK(w.value_at(1, 0) == 0.5);
    CHECK(w.value_at(0, 2) == 0.0);
}

TEST_CASE("affinity assembly is order independent") {
    std::vector<affinity_entry> entries{{0, 5, 0.1}, {5, 0, 0.1}, {2, 7, 0.9}, {7, 2, 0.9},
                                        {1, 4, 0.4}, {4, 1, 0.4}};
    auto shuffled = entries;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(7));
    const auto a = affinity_matrix::from_entries(3, entries);
    const auto b = affinity_matrix::from_entries(3, shuffled);
    for (int p = 0; p < a.dim(); ++p)
        for (int q = 0; q < a.dim(); ++q)
            CHECK(a.value_at(p, q) == b.value_at(p, q));
}

TEST_CASE("build_affinity: identical graphs score consistent pairs at exactly 1") {
    const point_set pts({{0, 0}, {1, 0}, {0.4, 0.8}});
    const auto g = compute_edge_attrs(pts, delaunay_triangulate(pts));
    const auto w = build_affinity(g, g, {0.7, 0.9});
    const int n = 3;
    for (const auto& [i, k] : g.edges()) {
        for (const auto& [j, l] : g.edges()) {
            if (std::minmax(i, k) != std::minmax(j, l))
                continue;
            CHECK(w.value_at(vec_index(n, i, j), vec_index(n, k, l)) == 1.0);
            CHECK(w.value_at(vec_index(n, i, l), vec_index(n, k, j)) == 1.0);
        }
    }
}

TEST_CASE("build_affinity: angle difference is circular on [0, pi)") {
    const point_set model_pts({{0, 0}, {1, 0}}); // d = 1, theta = 0
    const double th = pi - 0.01;
    const point_set data_pts({{0, 0}, {std::cos(th), std::sin(th)}}); // d = 1, theta = pi - 0.01
    const auto gm = two_node_edge(model_pts);
    const auto gd = two_node_edge(data_pts);
    const auto w = build_affinity(gm, gd, {1.0, 1.0});
    const double entry = w.value_at(vec_index(2, 0, 0), vec_index(2, 1, 1));
    CHECK(entry == doctest::Approx(std::exp(-1e-4)).epsilon(1e-10));
}

TEST_CASE("build_affinity matches the direct evaluation oracle") {
    // Two triangles, one data point perturbed.
    const point_set model_pts({{0, 0}, {1, 0}, {0.4, 0.8}});
    const point_set data_pts({{0, 0}, {1, 0}, {0.47, 0.73}});
    const auto gm = compute_edge_attrs(model_pts, delaunay_triangulate(model_pts));
    const auto gd = compute_edge_attrs(data_pts, delaunay_triangulate(data_pts));
    const affinity_params params{0.5, 0.5};
    const auto w = build_affinity(gm, gd, params);

    const int n = 3;
    int checked = 0;
    for (std::size_t em = 0; em < gm.edges().size(); ++em) {
        const auto [i, k] = gm.edges()[em];
        for (std::size_t ed = 0; ed < gd.edges().size(); ++ed) {
            const auto [j, l] = gd.edges()[ed];
            const double dd = gm.attrs()[em].distance - gd.attrs()[ed].distance;
            double dt = std::abs(gm.attrs()[em].angle - gd.attrs()[ed].angle);
            dt = std::min(dt, pi - dt);
            const double expect =
                std::exp(-dd * dd / (params.sigma_d * params.sigma_d) -
                         dt * dt / (params.sigma_theta * params.sigma_theta));
            CHECK(w.value_at(vec_index(n, i, j), vec_index(n, k, l)) ==
                  doctest::Approx(expect).epsilon(1e-14));
            CHECK(w.value_at(vec_index(n, i, l), vec_index(n, k, j)) ==
                  doctest::Approx(expect).epsilon(1e-14));
            checked += 2;
        }
    }
    CHECK(checked == 18);
    CHECK(w.nnz() == 4 * gm.edges().size() * gd.edges().size());
}

TEST_CASE("build_affinity invariants: symmetric, bounded, zero diagonal, sparsity bound") {
    rng r(4242);
    std::vector<point> mp(7), dp(7);
    for (auto& p : mp) p = {r.uniform(), r.uniform()};
    for (auto& p : dp) p = {r.uniform(), r.uniform()};
    const auto gm = compute_edge_attrs(point_set(mp), delaunay_triangulate(point_set(mp)));
    const auto gd = compute_edge_attrs(point_set(dp), delaunay_triangulate(point_set(dp)));
    const auto w = build_affinity(gm, gd, {0.4, pi / 4});

    CHECK(w.nnz() <= 4 * gm.edges().size() * gd.edges().size());
    for (int p = 0; p < w.dim(); ++p) {
        CHECK(w.value_at(p, p) == 0.0);
        const auto cols = w.row_cols(p);
        const auto vals = w.row_vals(p);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            CHECK(vals[k] > 0.0);
            CHECK(vals[k] <= 1.0);
            CHECK(w.value_at(cols[k], p) == vals[k]);
        }
    }
}

TEST_CASE("build_affinity rejects bad input") {
    const point_set pts({{0, 0}, {1, 0}, {0.4, 0.8}});
    const auto g = compute_edge_attrs(pts, delaunay_triangulate(pts));
    CHECK_THROWS_AS(build_affinity(g, g.padded_to(5), {1, 1}), dimension_mismatch);
    CHECK_THROWS_AS(build_affinity(g, g, {0.0, 1.0}), invalid_argument);
    CHECK_THROWS_AS(build_affinity(g, g, {1.0, -2.0}), invalid_argument);
    CHECK_THROWS_AS(build_affinity(delaunay_triangulate(pts), g, {1, 1}), invalid_argument);
}

TEST_CASE("pad_dummy") {
    SUBCASE("equal sizes unchanged") {
        match_instance inst;
        inst.model = point_set({{0, 0}, {1, 0}, {0, 1}, {2, 2}, {3, 1}});
        inst.data = inst.model;
        const auto padded = pad_dummy(inst);
        CHECK(padded.model_dummies == 0);
        CHECK(padded.data_dummies == 0);
    }
    SUBCASE("model side padded; affinity entries never touch dummies") {
        match_instance inst;
        inst.model = point_set({{0, 0}, {1, 0}, {0.2, 0.9}, {0.9, 0.8}});
        inst.data = point_set({{0, 0}, {1, 0}, {0.2, 0.9}, {0.9, 0.8}, {0.5, 0.4}, {1.4, 0.2}});
        inst.ground_truth = std::vector<int>{0, 1, 2, 3};
        const auto prob = build_problem(inst);
        CHECK(prob.n == 6);
        REQUIRE(prob.ground_truth.size() == 6);
        CHECK(prob.ground_truth[4] == -1);
        CHECK(prob.ground_truth[5] == -1);
        // Model nodes 4 and 5 are dummies: no affinity row touching them.
        for (int p = 0; p < prob.w.dim(); ++p) {
            if (prob.w.row_cols(p).empty())
                continue;
            const int i = p % 6;
            CHECK(i < 4);
        }
    }
}
