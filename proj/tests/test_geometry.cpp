#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mairs/geometry.hpp"

using namespace mairs;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("2x2 lattice is the four symmetric corners") {
    const IrsGeometry geom{2, 2, 0.03};
    const auto pts = irs_element_positions(geom);
    REQUIRE(pts.size() == 4);
    // y-index fastest, offsets -d/2 then +d/2
    CHECK(pts[0].y == doctest::Approx(-0.015).epsilon(1e-12));
    CHECK(pts[0].z == doctest::Approx(-0.015).epsilon(1e-12));
    CHECK(pts[1].y == doctest::Approx(0.015).epsilon(1e-12));
    CHECK(pts[1].z == doctest::Approx(-0.015).epsilon(1e-12));
    CHECK(pts[2].y == doctest::Approx(-0.015).epsilon(1e-12));
    CHECK(pts[2].z == doctest::Approx(0.015).epsilon(1e-12));
    CHECK(pts[3].y == doctest::Approx(0.015).epsilon(1e-12));
    CHECK(pts[3].z == doctest::Approx(0.015).epsilon(1e-12));
    for (const auto& p : pts) {
        CHECK(p.x == 0.0);
    }
}

TEST_CASE("lattice mean is the origin") {
    for (const auto& geom : {IrsGeometry{2, 2, 0.05}, IrsGeometry{15, 15, 0.03}, IrsGeometry{4, 6, 0.01}}) {
        Vec3 mean{};
        const auto pts = irs_element_positions(geom);
        for (const auto& p : pts) {
            mean = mean + p;
        }
        mean = mean * (1.0 / static_cast<double>(pts.size()));
        CHECK(std::abs(mean.x) < 1e-12);
        CHECK(std::abs(mean.y) < 1e-12);
        CHECK(std::abs(mean.z) < 1e-12);
    }
}

TEST_CASE("4x2 lattice has pitch 0.03 along rows") {
    const auto pts = irs_element_positions(IrsGeometry{4, 2, 0.03});
    REQUIRE(pts.size() == 8);
    for (int row = 0; row < 2; ++row) {
        for (int col = 0; col + 1 < 4; ++col) {
            const auto& a = pts[static_cast<std::size_t>(row * 4 + col)];
            const auto& b = pts[static_cast<std::size_t>(row * 4 + col + 1)];
            CHECK(distance(a, b) == doctest::Approx(0.03).epsilon(1e-12));
        }
    }
}

TEST_CASE("element positions are a pure function") {
    const IrsGeometry geom{6, 4, 0.021};
    const auto a = irs_element_positions(geom);
    const auto b = irs_element_positions(geom);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].z == b[i].z);
    }
}

TEST_CASE("sampling grid spans the segment") {
    const TxRegion region{{5, 5, 0}, {1, 0, 0}, 0.6, 0.03, 0.01};
    const auto pts = sample_tx_region(region);
    REQUIRE(pts.size() == 61);
    CHECK(pts.front().x == doctest::Approx(4.7).epsilon(1e-12));
    CHECK(pts.front().y == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(pts.back().x == doctest::Approx(5.3).epsilon(1e-12));
}

TEST_CASE("two-sample and one-sample grids") {
    TxRegion region{{5, 5, 0}, {1, 0, 0}, 0.6, 0.03, 0.6};
    auto pts = sample_tx_region(region);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == doctest::Approx(4.7).epsilon(1e-12));
    CHECK(pts[1].x == doctest::Approx(5.3).epsilon(1e-12));

    region.sample_spacing = 0.7;
    pts = sample_tx_region(region);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == doctest::Approx(4.7).epsilon(1e-12));
}

TEST_CASE("consecutive samples are exactly one pitch apart") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    for (int rep = 0; rep < 25; ++rep) {
        const Vec3 axis = Vec3{unif(rng), unif(rng), unif(rng)}.normalized();
        const TxRegion region{{unif(rng), unif(rng), unif(rng)}, axis, unif(rng), 0.05, 0.013};
        const auto pts = sample_tx_region(region);
        for (std::size_t k = 1; k < pts.size(); ++k) {
            CHECK(std::abs(distance(pts[k - 1], pts[k]) - region.sample_spacing) < 1e-12);
        }
    }
}

TEST_CASE("placement validation") {
    const TxRegion region{{5, 5, 0}, {1, 0, 0}, 0.6, 0.03, 0.01};

    SUBCASE("boundary spacing passes") {
        const Apv apv{{{4.9, 5, 0}, {4.93, 5, 0}}};
        CHECK(validate_apv(apv, region).ok);
    }
    SUBCASE("spacing below the minimum is flagged with the offending pair") {
        const Apv apv{{{4.9, 5, 0}, {4.929, 5, 0}}};
        const auto verdict = validate_apv(apv, region);
        REQUIRE_FALSE(verdict.ok);
        REQUIRE(verdict.violations.size() == 1);
        CHECK(verdict.violations[0].kind == ApvViolation::Kind::kSpacing);
        CHECK(verdict.violations[0].first == 0);
        CHECK(verdict.violations[0].second == 1);
    }
    SUBCASE("point before the segment start is outside the region") {
        const Apv apv{{{4.69, 5, 0}}};
        const auto verdict = validate_apv(apv, region);
        REQUIRE_FALSE(verdict.ok);
        REQUIRE(verdict.violations.size() == 1);
        CHECK(verdict.violations[0].kind == ApvViolation::Kind::kOutsideRegion);
        CHECK(verdict.violations[0].first == 0);
    }
    SUBCASE("off-axis point is outside the region") {
        const Apv apv{{{5.0, 5.001, 0}}};
        CHECK_FALSE(validate_apv(apv, region).ok);
    }
}

TEST_CASE("valid verdict survives permutations of the antenna list") {
    const TxRegion region{{5, 5, 0}, {1, 0, 0}, 0.6, 0.03, 0.01};
    Apv apv{{{4.75, 5, 0}, {4.85, 5, 0}, {5.05, 5, 0}, {5.25, 5, 0}}};
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        std::shuffle(apv.positions.begin(), apv.positions.end(), rng);
        CHECK(validate_apv(apv, region).ok);
    }
    std::reverse(apv.positions.begin(), apv.positions.end());
    CHECK(validate_apv(apv, region).ok);
}

TEST_SUITE_END();
