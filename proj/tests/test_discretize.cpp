#include <doctest.h>

#include <cmath>
#include <limits>

#include "spm/discretize.hpp"
#include "spm/errors.hpp"
#include "spm/rng.hpp"
#include "support/oracles.hpp"

using namespace spm;

namespace {

assignment_matrix random_scores(int n, std::uint64_t seed) {
    rng r(seed);
    std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (auto& x : v)
        x = r.uniform();
    return assignment_matrix::from_values(n, std::move(v));
}

} // namespace

TEST_CASE("permutation type") {
    CHECK_THROWS_AS(permutation({0, 0, 1}), invalid_argument);
    CHECK_THROWS_AS(permutation({0, 3, 1}), invalid_argument);
    const permutation p({2, 0, 1});
    CHECK(p.inverse().map() == std::vector<int>{1, 2, 0});
    CHECK(p.inverse().inverse() == p);
    CHECK(p.to_matrix()(0, 2) == 1.0);
    CHECK(p.to_matrix()(0, 0) == 0.0);
}

TEST_CASE("hungarian: basic examples") {
    SUBCASE("diagonal dominant 2x2") {
        const auto s = assignment_matrix::from_values(2, {2, 1, 1, 2});
        const auto p = hungarian(s);
        CHECK(p.map() == std::vector<int>{0, 1});
        CHECK(assignment_total(s, p) == 4.0);
    }
    SUBCASE("identity matrix maps straight through") {
        const auto p = hungarian(permutation({0, 1, 2, 3, 4}).to_matrix());
        CHECK(p.map() == std::vector<int>{0, 1, 2, 3, 4});
    }
    SUBCASE("n=1") {
        CHECK(hungarian(assignment_matrix::from_values(1, {0.4})).map() == std::vector<int>{0});
    }
    SUBCASE("all-equal scores resolve to the identity by lexicographic tie-break") {
        CHECK(hungarian(assignment_matrix(4, 1.0)).map() == std::vector<int>{0, 1, 2, 3});
        CHECK(hungarian(assignment_matrix(3, 0.0)).map() == std::vector<int>{0, 1, 2});
    }
}

TEST_CASE("hungarian equals the enumeration oracle for n <= 7") {
    for (int n = 2; n <= 7; ++n) {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const auto s = random_scores(n, 1000 * static_cast<std::uint64_t>(n) + seed);
            const auto p = hungarian(s);
            const auto [operm, ototal] = oracle::enumerate_assignment(s);
            CAPTURE(n);
            CAPTURE(seed);
            CHECK(p.map() == operm);
            CHECK(assignment_total(s, p) == doctest::Approx(ototal).epsilon(1e-12));
        }
    }
}

TEST_CASE("hungarian: permutation-matrix input round-trips") {
    const permutation p({3, 1, 4, 0, 2});
    CHECK(hungarian(p.to_matrix()) == p);
    CHECK(greedy_discretize(p.to_matrix()) == p);
}

TEST_CASE("hungarian: scaling invariance") {
    const auto s = random_scores(6, 77);
    const auto base = hungarian(s);
    for (double c : {0.5, 3.0, 1000.0}) {
        auto scaled = s;
        for (double& v : scaled.values())
            v *= c;
        CHECK(hungarian(scaled) == base);
    }
}

TEST_CASE("hungarian and greedy always produce bijections") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 1 + static_cast<int>(seed % 9);
        const auto s = random_scores(n, 555 + seed);
        CHECK(hungarian(s).n() == n);            // constructor validates bijectivity
        CHECK(greedy_discretize(s).n() == n);
    }
}

TEST_CASE("greedy_discretize") {
    SUBCASE("identity input") {
        CHECK(greedy_discretize(permutation({0, 1, 2}).to_matrix()).map() ==
              std::vector<int>{0, 1, 2});
    }
    SUBCASE("hand-simulated strike-out") {
        // Max entry 9 -> (1,1); strikes row 1 / col 1; next max 7 -> (2,0);
        // remaining (0,2) = 3.
        const auto s = assignment_matrix::from_values(3, {1, 2, 7, 5, 9, 4, 3, 6, 2});
        CHECK(greedy_discretize(s).map() == std::vector<int>{2, 1, 0});
    }
    SUBCASE("hungarian total is never below greedy total") {
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            const int n = 2 + static_cast<int>(seed % 7);
            const auto s = random_scores(n, seed);
            CHECK(assignment_total(s, hungarian(s)) >=
                  assignment_total(s, greedy_discretize(s)) - 1e-12);
        }
    }
}

TEST_CASE("discretize rejects non-finite scores") {
    auto s = assignment_matrix(2, 1.0);
    s(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(hungarian(s), invalid_argument);
    CHECK_THROWS_AS(greedy_discretize(s), invalid_argument);
}
