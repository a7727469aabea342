// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>

#include "maxcon/dataio.hpp"
#include "maxcon/errors.hpp"
#include "maxcon/oracle.hpp"
#include "maxcon/rng.hpp"
#include "test_util.hpp"

using namespace maxcon;
using namespace maxcon::testutil;

TEST_CASE("generator honors its ground truth contract") {
    SplitMix64 rng(0x9e47);
    for (int trial = 0; trial < 12; ++trial) {
        GeneratorSpec spec;
        spec.d = 1 + static_cast<int>(rng.next_below(3));
        spec.n = 10 + static_cast<int>(rng.next_below(10));
        spec.o = static_cast<int>(rng.next_below(5));
        spec.seed = rng.next_u64();
        auto [inst, gt] = generate_synthetic(spec);

        CHECK(inst.size() == spec.n);
        CHECK(static_cast<int>(gt.outlier_indices.size()) == spec.o);
        CHECK(gt.inlier_indices.size() + gt.outlier_indices.size() ==
              static_cast<std::size_t>(spec.n));
        for (Index i : gt.inlier_indices)
            CHECK(residual(inst, gt.theta_true, i) <= spec.epsilon);
        for (Index i : gt.outlier_indices)
            CHECK(residual(inst, gt.theta_true, i) > spec.epsilon);
    }
}

TEST_CASE("generator is deterministic and outlier-free data is fully consistent") {
    GeneratorSpec spec;
    spec.d = 2;
    spec.n = 12;
    spec.o = 0;
    spec.seed = 424242;
    auto [a, gta] = generate_synthetic(spec);
    auto [b, gtb] = generate_synthetic(spec);
    CHECK(serialize_instance(a, &gta) == serialize_instance(b, &gtb));
    CHECK(enumerate_optimal(a).consensus == 12);
}

TEST_CASE("oracle consensus is at least n - o on generated instances") {
    SplitMix64 rng(0x7777);
    for (int trial = 0; trial < 8; ++trial) {
        GeneratorSpec spec;
        spec.d = 2;
        spec.n = 12;
        spec.o = 1 + static_cast<int>(rng.next_below(4));
        spec.seed = rng.next_u64();
        auto [inst, gt] = generate_synthetic(spec);
        CHECK(enumerate_optimal(inst).consensus >= spec.n - spec.o);
    }
}

TEST_CASE("save and load round-trip bit-exactly") {
    GeneratorSpec spec;
    spec.d = 3;
    spec.n = 9;
    spec.o = 2;
    spec.seed = 31337;
    auto [inst, gt] = generate_synthetic(spec);

    auto loaded = parse_instance(serialize_instance(inst, &gt));
    REQUIRE(loaded.instance.size() == inst.size());
    CHECK(loaded.instance.epsilon == inst.epsilon);
    for (Index i = 0; i < inst.size(); ++i) {
        const auto& p = inst.linear[static_cast<std::size_t>(i)];
        const auto& q = loaded.instance.linear[static_cast<std::size_t>(i)];
        CHECK(p.a == q.a);  // exact doubles
        CHECK(p.b == q.b);
    }
    REQUIRE(loaded.ground_truth.has_value());
    CHECK(loaded.ground_truth->theta_true.theta == gt.theta_true.theta);
    CHECK(loaded.ground_truth->inlier_indices == gt.inlier_indices);
    CHECK(loaded.ground_truth->outlier_indices == gt.outlier_indices);

    // Through the filesystem as well.
    const auto path = std::filesystem::temp_directory_path() / "maxcon_io_test.json";
    save_instance(path.string(), inst, &gt);
    auto from_disk = load_instance(path.string());
    CHECK(serialize_instance(from_disk.instance,
                             from_disk.ground_truth ? &*from_disk.ground_truth : nullptr) ==
          serialize_instance(inst, &gt));
    std::filesystem::remove(path);
}

TEST_CASE("fractional instances round-trip") {
    ProblemInstance inst;
    inst.kind = ResidualKind::Fractional;
    inst.dim = 2;
    inst.epsilon = 0.25;
    SplitMix64 rng(5);
    for (int i = 0; i < 3; ++i) {
        FractionalDatum p;
        p.A.resize(2, 2);
        p.A << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
            rng.uniform(-1, 1);
        p.b = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1));
        p.c = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1));
        p.d0 = rng.uniform(-2, -1);
        inst.fractional.push_back(std::move(p));
    }
    inst.validate();
    auto loaded = parse_instance(serialize_instance(inst));
    REQUIRE(loaded.instance.kind == ResidualKind::Fractional);
    for (Index i = 0; i < inst.size(); ++i) {
        const auto& p = inst.fractional[static_cast<std::size_t>(i)];
        const auto& q = loaded.instance.fractional[static_cast<std::size_t>(i)];
        CHECK(p.A == q.A);
        CHECK(p.b == q.b);
        CHECK(p.c == q.c);
        CHECK(p.d0 == q.d0);
    }
}

TEST_CASE("malformed files are rejected with named fields") {
    auto inst = line_instance(0.1, {0.0, 1.0});
    std::string good = serialize_instance(inst);

    SUBCASE("missing epsilon") {
        std::string bad = good;
        bad.replace(bad.find("\"epsilon\""), 9, "\"epsilonX\"");
        try {
            parse_instance(bad);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
        }
    }
    SUBCASE("wrong regressor length") {
        std::string bad = good;
        bad.replace(bad.find("\"a\": [1]"), 8, "\"a\": [1,2]");
        CHECK_THROWS_AS(parse_instance(bad), DimensionMismatch);
    }
    SUBCASE("not json") { CHECK_THROWS_AS(parse_instance("hello"), ParseError); }
    SUBCASE("bad kind") {
        std::string bad = good;
        bad.replace(bad.find("\"linear\""), 8, "\"cubic\"");
        CHECK_THROWS_AS(parse_instance(bad), ParseError);
    }
}

TEST_CASE("generator spec validation") {
    GeneratorSpec spec;
    spec.d = 2;
    spec.n = 10;
    spec.o = 11;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.o = 2;
    spec.inlier_noise = 0.5;  // exceeds epsilon
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.inlier_noise = 0.1;
    CHECK_NOTHROW(spec.validate());
}
