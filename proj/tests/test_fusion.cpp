#include "salypath/fusion.hpp"

#include <cmath>

#include "doctest.h"
#include "salypath/errors.hpp"
#include "salypath/rng.hpp"
#include "test_support.hpp"

using namespace salypath;

TEST_CASE("linear_scale anchors") {
    SaliencyMap m(3, 1);
    m.values = {2.0, 4.0, 6.0};
    const SaliencyMap s = linear_scale(m);
    CHECK(s.values[0] == 0.0);
    CHECK(s.values[1] == 0.5);
    CHECK(s.values[2] == 1.0);

    SaliencyMap flat(4, 2, 3.0);
    const SaliencyMap ones = linear_scale(flat);
    for (double v : ones.values) CHECK(v == 1.0);

    SaliencyMap unit(2, 1);
    unit.values = {0.0, 1.0};
    const SaliencyMap same = linear_scale(unit);
    CHECK(same.values == unit.values);
}

TEST_CASE("joint_merge hand-evaluated pixel") {
    SaliencyMap t(2, 1), s(2, 1);
    t.values = {0.8, 0.1};
    s.values = {0.4, 0.05};
    const SaliencyMap j = joint_merge(t, s, {0.7, 1.0});
    // global max 0.8: 0.8 * (0.7 * 1.0 + 0.3 * 0.5) = 0.68
    CHECK(j.values[0] == doctest::Approx(0.68).epsilon(1e-14));
}

TEST_CASE("joint_merge identities") {
    Rng rng(31);
    const SaliencyMap t = testing::random_map(rng, 16, 8, 0.0, 2.0);
    const SaliencyMap s = testing::random_map(rng, 16, 8, 0.0, 2.0);

    for (double k : {1.0, 2.0, 3.5}) {
        const SaliencyMap jt = joint_merge(t, t, {0.7, k});
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(jt.values[i] == doctest::Approx(t.values[i]).epsilon(1e-13));
        }
        const SaliencyMap j1 = joint_merge(t, s, {1.0, k});
        const SaliencyMap j0 = joint_merge(t, s, {0.0, k});
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(j1.values[i] == doctest::Approx(t.values[i]).epsilon(1e-13));
            CHECK(j0.values[i] == doctest::Approx(s.values[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("joint_merge at k = 1 is exactly the weighted average") {
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const SaliencyMap t = testing::random_map(rng, 12, 6);
        const SaliencyMap s = testing::random_map(rng, 12, 6);
        const double alpha = rng.uniform();
        const SaliencyMap j = joint_merge(t, s, {alpha, 1.0});
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double expect = alpha * t.values[i] + (1.0 - alpha) * s.values[i];
            CHECK(std::fabs(j.values[i] - expect) < 1e-12);
        }
    }
}

TEST_CASE("joint_merge pointwise betweenness and homogeneity") {
    Rng rng(33);
    for (double k : {1.0, 1.5, 2.0, 4.0}) {
        const SaliencyMap t = testing::random_map(rng, 16, 8);
        const SaliencyMap s = testing::random_map(rng, 16, 8);
        const SaliencyMap j = joint_merge(t, s, {0.7, k});
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double lo = std::min(t.values[i], s.values[i]);
            const double hi = std::max(t.values[i], s.values[i]);
            CHECK(j.values[i] >= lo - 1e-12);
            CHECK(j.values[i] <= hi + 1e-12);
        }

        const double c = 2.5;
        SaliencyMap tc = t, sc = s;
        for (double& v : tc.values) v *= c;
        for (double& v : sc.values) v *= c;
        const SaliencyMap jc = joint_merge(tc, sc, {0.7, k});
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(jc.values[i] == doctest::Approx(c * j.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("joint_merge is monotone in T under a fixed global max") {
    Rng rng(34);
    SaliencyMap t = testing::random_map(rng, 8, 4, 0.0, 0.5);
    SaliencyMap s = testing::random_map(rng, 8, 4, 0.0, 0.5);
    s.values[0] = 1.0; // pins the global max
    const FusionConfig cfg{0.6, 2.0};
    const SaliencyMap j = joint_merge(t, s, cfg);
    SaliencyMap t2 = t;
    t2.values[5] += 0.25;
    const SaliencyMap j2 = joint_merge(t2, s, cfg);
    CHECK(j2.values[5] >= j.values[5]);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (i != 5) CHECK(j2.values[i] == j.values[i]);
    }
}

TEST_CASE("joint_merge error paths") {
    SaliencyMap t(2, 1, 0.0), s(2, 1, 0.0);
    CHECK_THROWS_AS(joint_merge(t, s), DegenerateError);
    SaliencyMap wrong(3, 1, 0.1);
    CHECK_THROWS_AS(joint_merge(wrong, s), ShapeError);
    SaliencyMap ok(2, 1, 0.5);
    CHECK_THROWS_AS(joint_merge(ok, s, {1.5, 1.0}), DomainError);
    CHECK_THROWS_AS(joint_merge(ok, s, {0.5, 0.5}), DomainError);
}

TEST_CASE("unbias anchors and damping bound") {
    Rng rng(35);
    const SaliencyMap j = testing::random_map(rng, 16, 8);

    SaliencyMap constant_bias(16, 8, 0.7);
    const SaliencyMap same = unbias(j, constant_bias);
    CHECK(same.values == j.values); // Ls of a constant map is all ones

    const SaliencyMap e = testing::random_map(rng, 16, 8);
    const SaliencyMap star = unbias(j, e);
    const SaliencyMap ls = linear_scale(e);
    for (std::size_t i = 0; i < j.size(); ++i) {
        CHECK(star.values[i] >= 0.5 * j.values[i] - 1e-15);
        CHECK(star.values[i] <= j.values[i] + 1e-15);
        if (ls.values[i] == 0.0) CHECK(star.values[i] == 0.5 * j.values[i]);
    }

    // 0.5 * 0.68 + 0.5 * 0.68 * 0.5 = 0.51
    SaliencyMap jj(3, 1), ee(3, 1);
    jj.values = {0.68, 0.68, 0.68};
    ee.values = {0.0, 1.0, 2.0}; // Ls -> {0, 0.5, 1}
    const SaliencyMap out = unbias(jj, ee);
    CHECK(out.values[1] == doctest::Approx(0.51).epsilon(1e-14));

    SaliencyMap wrong(2, 1, 0.1);
    CHECK_THROWS_AS(unbias(jj, wrong), ShapeError);
}

TEST_CASE("salypath_pipeline composes merge and unbias") {
    Rng rng(36);
    const int w = 32, h = 16;
    const Scanpath sp = testing::random_scanpath(rng, 20);
    const SaliencyMap t = testing::random_map(rng, w, h);

    PipelineConfig cfg;
    const SaliencyMap out = salypath_pipeline(t, sp, cfg);

    // Independently composed chain, pixelwise identical to 1e-12.
    const SaliencyMap s = scanpath_to_map(sp, w, h, cfg.kernel);
    const SaliencyMap e = equator_bias(w, h, cfg.bias);
    const SaliencyMap expect = unbias(joint_merge(t, s, cfg.fusion), e);
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(std::fabs(out.values[i] - expect.values[i]) < 1e-12);
    }

    // T built from the same scanpath with a constant bias: identity.
    PipelineConfig id_cfg;
    const SaliencyMap s_as_t = scanpath_to_map(sp, w, h, id_cfg.kernel);
    SaliencyMap j2 = joint_merge(s_as_t, s_as_t, id_cfg.fusion);
    for (std::size_t i = 0; i < j2.size(); ++i) {
        CHECK(j2.values[i] == doctest::Approx(s_as_t.values[i]).epsilon(1e-13));
    }

    // alpha = 1 ignores the scanpath inside the merge.
    PipelineConfig a1;
    a1.fusion.alpha = 1.0;
    const SaliencyMap merged = joint_merge(t, s, a1.fusion);
    for (std::size_t i = 0; i < merged.size(); ++i) {
        CHECK(merged.values[i] == doctest::Approx(t.values[i]).epsilon(1e-13));
    }
}
