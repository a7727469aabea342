// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "maxcon/dataio.hpp"
#include "maxcon/errors.hpp"
#include "maxcon/oracle.hpp"
#include "maxcon/rng.hpp"
#include "test_util.hpp"

using namespace maxcon;
using namespace maxcon::testutil;

TEST_CASE("enumeration finds hand-checkable optima") {
    SUBCASE("all inliers") {
        auto inst = line_instance(0.1, {0.0, 0.05, 0.1, 0.15});
        CHECK(enumerate_optimal(inst).consensus == 4);
    }
    SUBCASE("tight pair beats the stray point") {
        auto inst = line_instance(0.1, {0.0, 0.05, 5.0});
        auto r = enumerate_optimal(inst);
        CHECK(r.consensus == 2);
        CHECK(r.max_feasible_set == IndexSet{1, 2});
    }
    SUBCASE("planted outliers leave at least n - o consensus") {
        GeneratorSpec spec;
        spec.d = 2;
        spec.n = 12;
        spec.o = 3;
        spec.seed = 99;
        auto [inst, gt] = generate_synthetic(spec);
        CHECK(enumerate_optimal(inst).consensus >= 9);
    }
}

TEST_CASE("minimum removal counts") {
    auto inst = line_instance(0.1, {0.0, 0.05, 0.1, 5.0});
    const IndexSet all = inst.all_indices();
    SUBCASE("feasible coverage needs none") {
        CHECK(min_removal(inst, {1, 2, 3}, {}) == 0);
    }
    SUBCASE("one gross outlier needs one") {
        CHECK(min_removal(inst, all, {}) == 1);
    }
    SUBCASE("forcing the outlier is strictly worse") {
        auto base = min_removal(inst, all, {});
        auto forced = min_removal(inst, all, {4});
        REQUIRE(base.has_value());
        REQUIRE(forced.has_value());
        CHECK(*forced > *base);
        CHECK(*forced == 3);
    }
    SUBCASE("infeasible forced set yields the sentinel") {
        auto wide = line_instance(0.1, {0.0, 10.0});
        CHECK_FALSE(min_removal(wide, wide.all_indices(), {1, 2}).has_value());
    }
}

TEST_CASE("enumeration guard rejects oversized inputs") {
    std::vector<std::pair<std::vector<double>, double>> pts;
    SplitMix64 rng(3);
    for (int i = 0; i < 40; ++i) {
        std::vector<double> a(8);
        for (auto& v : a) v = rng.uniform(-1.0, 1.0);
        pts.push_back({a, rng.uniform(-1.0, 1.0)});
    }
    auto inst = make_linear_instance(8, 0.1, std::move(pts));
    CHECK_THROWS_AS(enumerate_optimal(inst), InstanceTooLarge);
}

TEST_CASE("lemma-1 diagnostic arithmetic") {
    // h* = 0 with more than one coverage point can never satisfy the bound.
    CHECK_FALSE(lemma1_diagnostic(10, 0, 2.0));
    CHECK(lemma1_diagnostic(5, 4, 2.0));   // 8 >= 4
    CHECK_FALSE(lemma1_diagnostic(10, 2, 2.0));  // 4 < 9
}

TEST_CASE("lo-ransac baseline") {
    SUBCASE("outlier-free data is always fully explained") {
        GeneratorSpec spec;
        spec.d = 2;
        spec.n = 14;
        spec.o = 0;
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            spec.seed = seed;
            auto [inst, gt] = generate_synthetic(spec);
            for (std::uint64_t rs : {7ULL, 8ULL})
                CHECK(lo_ransac(inst, 10, rs).consensus == 14);
        }
    }
    SUBCASE("never beats the oracle and is seed-deterministic") {
        SplitMix64 rng(0x10ab);
        for (int trial = 0; trial < 10; ++trial) {
            GeneratorSpec spec;
            spec.d = 2;
            spec.n = 12;
            spec.o = 3;
            spec.seed = rng.next_u64();
            auto [inst, gt] = generate_synthetic(spec);
            auto best = enumerate_optimal(inst);
            auto a = lo_ransac(inst, 20, 42);
            auto b = lo_ransac(inst, 20, 42);
            CHECK(a.consensus <= best.consensus);
            CHECK(a.consensus == b.consensus);
            CHECK(a.max_feasible_set == b.max_feasible_set);
            CHECK(a.witness_model.theta == b.witness_model.theta);
        }
    }
}
