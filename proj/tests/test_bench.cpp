#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "spm/bench.hpp"
#include "spm/discretize.hpp"
#include "spm/errors.hpp"
#include "support/oracles.hpp"

using namespace spm;

TEST_CASE("gen_synthetic") {
    SUBCASE("same seed twice gives bit-identical instances") {
        const auto a = gen_synthetic(8, 3, 0.05, 424242);
        const auto b = gen_synthetic(8, 3, 0.05, 424242);
        REQUIRE(a.model.size() == b.model.size());
        CHECK(std::memcmp(a.model.points().data(), b.model.points().data(),
                          a.model.points().size() * sizeof(point)) == 0);
        CHECK(std::memcmp(a.data.points().data(), b.data.points().data(),
                          a.data.points().size() * sizeof(point)) == 0);
        CHECK(*a.ground_truth == *b.ground_truth);
        CHECK(a.meta.rotation == b.meta.rotation);
    }
    SUBCASE("noiseless instances are exact rigid images") {
        const auto inst = gen_synthetic(10, 0, 0.0, 7);
        REQUIRE(inst.ground_truth.has_value());
        const auto& gt = *inst.ground_truth;
        for (int i = 0; i < 10; ++i) {
            for (int k = i + 1; k < 10; ++k) {
                const double dm = std::hypot(inst.model[i].x - inst.model[k].x,
                                             inst.model[i].y - inst.model[k].y);
                const double dd = std::hypot(inst.data[gt[i]].x - inst.data[gt[k]].x,
                                             inst.data[gt[i]].y - inst.data[gt[k]].y);
                CHECK(dm == doctest::Approx(dd).epsilon(1e-12));
            }
        }
    }
    SUBCASE("outliers carry no ground truth") {
        const auto inst = gen_synthetic(5, 4, 0.0, 11);
        const auto& gt = *inst.ground_truth;
        REQUIRE(gt.size() == 9);
        for (int i = 5; i < 9; ++i)
            CHECK(gt[static_cast<std::size_t>(i)] == -1);
        for (int i = 0; i < 5; ++i)
            CHECK(gt[static_cast<std::size_t>(i)] >= 0);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(gen_synthetic(2, 0, 0.0, 1), invalid_argument);
        CHECK_THROWS_AS(gen_synthetic(5, -1, 0.0, 1), invalid_argument);
        CHECK_THROWS_AS(gen_synthetic(5, 0, -0.1, 1), invalid_argument);
    }
}

TEST_CASE("accuracy") {
    const permutation pred({1, 0, 2, 3});
    SUBCASE("identical") {
        const std::vector<int> gt{1, 0, 2, 3};
        CHECK(accuracy(pred, gt) == 1.0);
    }
    SUBCASE("disjoint on all-inlier ground truth") {
        const std::vector<int> gt{0, 1, 3, 2};
        CHECK(accuracy(pred, gt) == 0.0);
    }
    SUBCASE("half right on 4 inliers") {
        const std::vector<int> gt{1, 0, 3, 2};
        CHECK(accuracy(pred, gt) == 0.5);
    }
    SUBCASE("don't-care rows are excluded") {
        const std::vector<int> gt{1, -1, -1, 3};
        CHECK(accuracy(pred, gt) == 1.0);
    }
    SUBCASE("size mismatch") {
        const std::vector<int> gt{0, 1};
        CHECK_THROWS_AS(accuracy(pred, gt), dimension_mismatch);
    }
}

TEST_CASE("sparsity") {
    CHECK(sparsity(permutation({2, 0, 1}).to_matrix()) == 3);
    CHECK(sparsity(assignment_matrix(4, 0.3)) == 16);
    CHECK(sparsity(assignment_matrix(3)) == 0); // all-zero
    auto x = assignment_matrix(2, 1.0);
    x(0, 0) = 1e-5; // below 1e-3 * max
    CHECK(sparsity(x) == 3);
}

TEST_CASE("orthogonality") {
    CHECK(orthogonality(permutation({1, 2, 0, 3}).to_matrix()) == 0.0);
    CHECK(orthogonality(assignment_matrix(2, 0.5)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(orthogonality(assignment_matrix::from_values(1, {0.4})) == 0.0);
}

TEST_CASE("brute_force_oracle") {
    SUBCASE("n=1") {
        const auto w = affinity_matrix::from_entries(1, {{0, 0, 0.3}});
        const auto [p, obj] = brute_force_oracle(w);
        CHECK(p.map() == std::vector<int>{0});
        CHECK(obj == 0.3);
    }
    SUBCASE("all-zero W ties to the identity") {
        const auto [p, obj] = brute_force_oracle(affinity_matrix::from_entries(3, {}));
        CHECK(p.map() == std::vector<int>{0, 1, 2});
        CHECK(obj == 0.0);
    }
    SUBCASE("planted 0/1 instance") {
        const std::vector<int> planted{1, 3, 0, 2};
        const auto w = affinity_matrix::from_entries(4, oracle::planted_entries(4, planted));
        const auto [p, obj] = brute_force_oracle(w);
        CHECK(p.map() == planted);
        CHECK(obj == doctest::Approx(12.0)); // n*(n-1) unit weights
    }
    SUBCASE("capped at n = 8") {
        CHECK_THROWS_AS(brute_force_oracle(affinity_matrix::from_entries(9, {})),
                        invalid_argument);
    }
}

TEST_CASE("run_sweep") {
    SUBCASE("row counting") {
        sweep_config cfg;
        cfg.methods = {"spm"};
        cfg.n_inliers = 6;
        cfg.outlier_min = 0;
        cfg.outlier_max = 0;
        cfg.trials = 1;
        CHECK(run_sweep(cfg).size() == 1);

        cfg.methods = {"spm", "spectral"};
        cfg.outlier_max = 1;
        cfg.trials = 2;
        const auto rows = run_sweep(cfg);
        CHECK(rows.size() == 8); // 2 methods * 2 counts * 2 trials
        // ordering: (outliers, trial, method-in-config-order)
        CHECK(rows[0].outliers == 0);
        CHECK(rows[0].trial == 0);
        CHECK(rows[0].method == "spm");
        CHECK(rows[1].method == "spectral");
        CHECK(rows[2].trial == 1);
        CHECK(rows.back().outliers == 1);
    }
    SUBCASE("deterministic apart from wall time; relative objective normalized per instance") {
        sweep_config cfg;
        cfg.n_inliers = 6;
        cfg.outlier_min = 1;
        cfg.outlier_max = 2;
        cfg.trials = 2;
        const auto a = run_sweep(cfg);
        const auto b = run_sweep(cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].method == b[i].method);
            CHECK(a[i].seed == b[i].seed);
            CHECK(a[i].accuracy == b[i].accuracy);
            CHECK(a[i].objective == b[i].objective);
            CHECK(a[i].relative_objective == b[i].relative_objective);
            CHECK(a[i].iterations == b[i].iterations);
            CHECK(a[i].sparsity == b[i].sparsity);
            CHECK(a[i].orthogonality == b[i].orthogonality);
        }
        // per instance: every relative objective in [0,1], at least one at 1
        for (std::size_t base = 0; base < a.size(); base += cfg.methods.size()) {
            double best = 0.0;
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                CHECK(a[base + m].relative_objective >= 0.0);
                CHECK(a[base + m].relative_objective <= 1.0);
                best = std::max(best, a[base + m].relative_objective);
            }
            CHECK(best == 1.0);
        }
    }
    SUBCASE("unknown method rejected") {
        sweep_config cfg;
        cfg.methods = {"spm", "gradient"};
        CHECK_THROWS_AS(run_sweep(cfg), invalid_argument);
    }
}

TEST_CASE("end-to-end: noiseless planted instance recovers ground truth") {
    const auto inst = gen_synthetic(6, 0, 0.0, 20240601);
    const auto prob = build_problem(inst);
    const auto rep = spm_solve(prob.w, {});
    const auto perm = hungarian(rep.final_x);
    CHECK(accuracy(perm, prob.ground_truth) == 1.0);
    // oracle-verified IQP optimum
    const auto [operm, oobj] = brute_force_oracle(prob.w);
    CHECK(perm == operm);
}

TEST_CASE("oracle consistency on small noiseless planted instances") {
    for (int n = 3; n <= 6; ++n) {
        const auto inst = gen_synthetic(n, 0, 0.0, 8800 + static_cast<std::uint64_t>(n));
        const auto prob = build_problem(inst);
        const auto rep = spm_solve(prob.w, {});
        const auto perm = hungarian(rep.final_x);
        const auto [operm, oobj] = brute_force_oracle(prob.w);
        CAPTURE(n);
        CHECK(perm == operm);
        CHECK(compute_alpha(prob.w, perm.to_matrix()) ==
              doctest::Approx(oobj).epsilon(1e-12));
    }
}

TEST_CASE("sparsity trajectory is non-increasing after the first iterations") {
    const auto inst = gen_synthetic(6, 0, 0.0, 31337);
    const auto prob = build_problem(inst);
    auto x = init_solution(prob.n, uniform_feasible_init{});
    int prev = prob.n * prob.n;
    for (int t = 0; t < 120; ++t) {
        x = spm_step(x, prob.w, 1e-12).first;
        const int s = sparsity(x);
        if (t >= 10)
            CHECK(s <= prev);
        prev = s;
    }
    CHECK(prev == prob.n); // near-permutation support at convergence
}

TEST_CASE("metrics csv shape") {
    sweep_config cfg;
    cfg.methods = {"spm"};
    cfg.n_inliers = 5;
    cfg.outlier_min = 0;
    cfg.outlier_max = 0;
    cfg.trials = 1;
    const auto rows = run_sweep(cfg);
    std::ostringstream os;
    write_metrics_csv(os, rows);
    const std::string text = os.str();
    CHECK(text.starts_with("method,outliers,trial,seed,accuracy,objective,relative_objective,"
                           "iterations,wall_ms,sparsity,orthogonality\n"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}
