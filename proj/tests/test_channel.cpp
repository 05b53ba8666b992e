#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mairs/channel.hpp"
#include "mairs/rng.hpp"

using namespace mairs;
using std::numbers::pi;

namespace {

// Independent lattice coordinates for oracle loops: y-index fastest, centered offsets.
std::vector<Vec3> oracle_lattice(int my, int mz, double d) {
    std::vector<Vec3> pts;
    for (int kz = 0; kz < mz; ++kz) {
        for (int ky = 0; ky < my; ++ky) {
            pts.push_back({0.0, (ky - 0.5 * (my - 1)) * d, (kz - 0.5 * (mz - 1)) * d});
        }
    }
    return pts;
}

Cx oracle_los_entry(const Vec3& t, const Vec3& e, double lambda) {
    const double d = (t - e).norm();
    return lambda / (4.0 * pi * d) * std::exp(Cx(0.0, 2.0 * pi / lambda * d));
}

} // namespace

TEST_SUITE_BEGIN("channel");

TEST_CASE("LoS entry magnitude and phase for a single element") {
    const double lambda = 0.06;
    const IrsGeometry geom{1, 1, 0.03}; // one element at the origin
    const Vec3 t{5, 5, 0};
    const auto h = nf_los_vector(t, geom, lambda);
    REQUIRE(h.size() == 1);
    const double dist = std::sqrt(50.0);
    CHECK(std::abs(h[0]) == doctest::Approx(lambda / (4.0 * pi * dist)).epsilon(1e-12));
    const double expected_phase = std::fmod(2.0 * pi / lambda * dist, 2.0 * pi);
    const double got = std::arg(h[0]);
    const double wrapped = got < 0 ? got + 2.0 * pi : got;
    CHECK(wrapped == doctest::Approx(expected_phase).epsilon(1e-9));
}

TEST_CASE("doubling the distance halves the magnitude") {
    const double lambda = 0.06;
    const IrsGeometry geom{1, 1, 0.03};
    const auto near = nf_los_vector({2, 1, 0}, geom, lambda);
    const auto far = nf_los_vector({4, 2, 0}, geom, lambda);
    CHECK(std::abs(far[0]) == doctest::Approx(0.5 * std::abs(near[0])).epsilon(1e-12));
}

TEST_CASE("boresight point sees mirror-image elements identically") {
    const double lambda = 0.06;
    const IrsGeometry geom{2, 2, 0.03};
    const auto h = nf_los_vector({5, 0, 0}, geom, lambda);
    REQUIRE(h.size() == 4);
    for (int m = 1; m < 4; ++m) {
        CHECK(std::abs(h[m] - h[0]) < 1e-15);
    }
}

TEST_CASE("degenerate distance is rejected") {
    const IrsGeometry geom{2, 2, 0.03};
    CHECK_THROWS_AS(nf_los_vector({0, 0.015, 0.015}, geom, 0.06), std::domain_error);
}

TEST_CASE("matrix columns match the vector generator") {
    const double lambda = 0.06;
    const IrsGeometry geom{3, 3, 0.03};

    SUBCASE("single antenna") {
        const Apv apv{{{5, 5, 0}}};
        const auto m = nf_los_matrix(apv, geom, lambda);
        const auto v = nf_los_vector({5, 5, 0}, geom, lambda);
        REQUIRE(m.cols() == 1);
        CHECK((m.col(0) - v).norm() == 0.0);
    }
    SUBCASE("duplicate positions give duplicate columns") {
        const Apv apv{{{5, 5, 0}, {5, 5, 0}}};
        const auto m = nf_los_matrix(apv, geom, lambda);
        CHECK((m.col(0) - m.col(1)).norm() == 0.0);
    }
    SUBCASE("independent scalar-loop oracle, N = 4") {
        const Apv apv{{{4.7, 5, 0}, {4.9, 5, 0}, {5.1, 5, 0}, {5.3, 5, 0}}};
        const auto m = nf_los_matrix(apv, geom, lambda);
        const auto lattice = oracle_lattice(3, 3, 0.03);
        for (int n = 0; n < 4; ++n) {
            for (std::size_t e = 0; e < lattice.size(); ++e) {
                const Cx expected =
                    oracle_los_entry(apv.positions[static_cast<std::size_t>(n)], lattice[e], lambda);
                CHECK(std::abs(m(static_cast<Eigen::Index>(e), n) - expected) < 1e-15);
            }
        }
    }
}

TEST_CASE("array responses are phase-only") {
    const double lambda = 0.06;
    const IrsGeometry geom{4, 4, 0.03};
    const auto a = nf_array_response_irs({3, 1, -2}, geom, lambda);
    for (Eigen::Index m = 0; m < a.size(); ++m) {
        CHECK(std::abs(std::abs(a[m]) - 1.0) < 1e-14);
    }

    // Equidistant antennas from s get equal entries.
    const Apv apv{{{1, 1, 0}, {1, -1, 0}}};
    const auto b = nf_array_response_tx(apv, {5, 0, 0}, lambda);
    CHECK(std::abs(b[0] - b[1]) < 1e-14);

    // A full wavelength of distance is a full turn of phase.
    const Apv ring{{{lambda, 0, 0}, {0, lambda, 0}}};
    const auto unit = nf_array_response_tx(ring, {0, 0, 0}, lambda);
    CHECK(std::abs(unit[0] - Cx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(unit[1] - Cx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("multipath channel") {
    const double lambda = 0.06;
    const IrsGeometry geom{3, 3, 0.03};
    const Apv apv{{{4.8, 5, 0}, {5.2, 5, 0}}};

    SUBCASE("no scatterers reduces to LoS") {
        const auto h = multipath_channel(apv, geom, {}, lambda);
        CHECK((h - nf_los_matrix(apv, geom, lambda)).norm() == 0.0);
    }
    SUBCASE("zero-gain path contributes nothing") {
        const ScatterSet paths{{{2, 2, 0.5}, Cx(0, 0)}};
        const auto h = multipath_channel(apv, geom, paths, lambda);
        CHECK((h - nf_los_matrix(apv, geom, lambda)).norm() == 0.0);
    }
    SUBCASE("two scatterers against a triple-loop oracle") {
        const ScatterSet paths{{{2, 2, 0.5}, Cx(3e-4, -1e-4)}, {{1.5, 3, -0.4}, Cx(-2e-4, 2e-4)}};
        const auto h = multipath_channel(apv, geom, paths, lambda);
        const auto lattice = oracle_lattice(3, 3, 0.03);
        const double k = 2.0 * pi / lambda;
        for (std::size_t e = 0; e < lattice.size(); ++e) {
            for (int n = 0; n < apv.size(); ++n) {
                Cx expected = oracle_los_entry(apv.positions[static_cast<std::size_t>(n)], lattice[e], lambda);
                for (const auto& p : paths) {
                    const double d_irs = (p.position - lattice[e]).norm();
                    const double d_tx = (p.position - apv.positions[static_cast<std::size_t>(n)]).norm();
                    expected += p.gain * std::exp(Cx(0, k * d_irs)) * std::exp(Cx(0, k * d_tx));
                }
                CHECK(std::abs(h(static_cast<Eigen::Index>(e), n) - expected) < 1e-15);
            }
        }
    }
    SUBCASE("linear in each path gain") {
        ScatterSet paths{{{2, 2, 0.5}, Cx(3e-4, -1e-4)}, {{1.5, 3, -0.4}, Cx(-2e-4, 2e-4)}};
        const auto base = multipath_channel(apv, geom, paths, lambda);
        const Cx scale(2.5, 0.0);
        ScatterSet scaled = paths;
        scaled[0].gain *= scale;
        const auto bumped = multipath_channel(apv, geom, scaled, lambda);
        // The difference must be exactly (scale-1) x the first path's rank-one term.
        const auto a = nf_array_response_irs(paths[0].position, geom, lambda);
        const auto b = nf_array_response_tx(apv, paths[0].position, lambda);
        const CxMatrix delta = (scale - 1.0) * paths[0].gain * a * b.transpose();
        CHECK((bumped - base - delta).norm() < 1e-16);
    }
}

TEST_CASE("far-field channel is rank one with constant-magnitude entries") {
    const double lambda = 0.06;
    const IrsGeometry geom{4, 4, 0.03};
    const Apv apv{{{4.7, 5, 0}, {4.9, 5.1, 0}, {5.2, 4.9, 0.1}}};
    const Cx beta(2e-4, 1e-4);
    const auto h = farfield_channel(apv, geom, beta, Vec3{1, 0.2, -0.1}, lambda);

    Eigen::JacobiSVD<CxMatrix> svd(h);
    const auto& sv = svd.singularValues();
    CHECK(sv[1] < 1e-10 * sv[0]);

    for (Eigen::Index m = 0; m < h.rows(); ++m) {
        for (Eigen::Index n = 0; n < h.cols(); ++n) {
            CHECK(std::abs(std::abs(h(m, n)) - std::abs(beta)) < 1e-15);
        }
    }
}

TEST_CASE("boresight far-field arrival excites all elements equally") {
    const double lambda = 0.06;
    const IrsGeometry geom{4, 2, 0.03};
    const Apv apv{{{5, 5, 0}}};
    const auto h = farfield_channel(apv, geom, Cx(1e-3, 0), Vec3{1, 0, 0}, lambda);
    for (Eigen::Index m = 1; m < h.rows(); ++m) {
        CHECK(std::abs(h(m, 0) - h(0, 0)) < 1e-15);
    }
}

TEST_CASE("rician user link") {
    const double lambda = 0.06;
    const IrsGeometry geom{15, 15, 0.03};
    const Vec3 user{2.9786, 29.7857, -1.9857};

    SUBCASE("huge K collapses to the LoS magnitude") {
        FadingParams fading{1e12, 2.8, 30.0, lambda / (4.0 * pi)};
        const auto h = rician_irs_user(geom, user, fading, lambda, 42);
        const double expect = fading.reference_gain * std::pow(30.0, -1.4);
        for (Eigen::Index m = 0; m < h.size(); ++m) {
            CHECK(std::abs(h[m]) == doctest::Approx(expect).epsilon(1e-4));
        }
    }
    SUBCASE("same seed reproduces the same vector") {
        FadingParams fading{2.0, 2.8, 30.0, lambda / (4.0 * pi)};
        const auto a = rician_irs_user(geom, user, fading, lambda, 1234);
        const auto b = rician_irs_user(geom, user, fading, lambda, 1234);
        CHECK((a - b).norm() == 0.0);
        const auto c = rician_irs_user(geom, user, fading, lambda, 1235);
        CHECK((a - c).norm() > 0.0);
    }
    SUBCASE("Monte-Carlo second moment matches the path loss") {
        // Oracle: E ||h||^2 / M = PL for any K, estimated over 10^4 seeds.
        FadingParams fading{std::pow(10.0, 0.3), 2.8, 30.0, lambda / (4.0 * pi)};
        const double pl = std::pow(fading.reference_gain * std::pow(30.0, -1.4), 2);
        double acc = 0.0;
        const int n_seeds = 10000;
        for (int s = 0; s < n_seeds; ++s) {
            const auto h = rician_irs_user(geom, user, fading, lambda, static_cast<std::uint64_t>(s));
            acc += h.squaredNorm() / static_cast<double>(geom.element_count());
        }
        acc /= static_cast<double>(n_seeds);
        CHECK(acc == doctest::Approx(pl).epsilon(0.02));
    }
}

TEST_CASE("direct transmitter-user link") {
    const double lambda = 0.06;

    SUBCASE("free-space magnitude at one meter") {
        const Cx h = direct_bu_channel({0, 0, 0}, {1, 0, 0}, lambda);
        CHECK(std::abs(h) == doctest::Approx(lambda / (4.0 * pi)).epsilon(1e-12));
    }
    SUBCASE("magnitude strictly decreases with distance") {
        double prev = 1.0;
        for (double d : {0.5, 1.0, 2.0, 7.0, 31.0}) {
            const double mag = std::abs(direct_bu_channel({0, 0, 0}, {d, 0, 0}, lambda));
            CHECK(mag < prev);
            prev = mag;
        }
    }
    SUBCASE("distances one wavelength apart share a phase") {
        const Cx a = direct_bu_channel({0, 0, 0}, {2.0, 0, 0}, lambda);
        const Cx b = direct_bu_channel({0, 0, 0}, {2.0 + lambda, 0, 0}, lambda);
        CHECK(std::arg(a) == doctest::Approx(std::arg(b)).epsilon(1e-9));
    }
}

TEST_CASE("equidistant element permutation symmetry") {
    // Magnitudes depend only on distance: a point on the y = 0 plane sees the
    // +y and -y half-lattices as mirror images.
    const double lambda = 0.06;
    const IrsGeometry geom{4, 4, 0.03};
    const auto h = nf_los_vector({3, 0, 0.4}, geom, lambda);
    // y-index fastest: columns ky and (3-ky) mirror each other in every row.
    for (int kz = 0; kz < 4; ++kz) {
        for (int ky = 0; ky < 2; ++ky) {
            const auto lhs = h[kz * 4 + ky];
            const auto rhs = h[kz * 4 + (3 - ky)];
            CHECK(std::abs(lhs - rhs) < 1e-15);
        }
    }
}

TEST_SUITE_END();
