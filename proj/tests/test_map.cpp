#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "mcdim/map.hpp"

using namespace mcdim;
using Catch::Matchers::WithinAbs;

namespace {
const double two_pi = 2.0 * 3.141592653589793238462643;
}

TEST_CASE("map construction validates Q") {
    REQUIRE_THROWS_AS(McMullenMap(2, {0.0, 0.0}), std::invalid_argument);
    REQUIRE_NOTHROW(McMullenMap(3, {0.0, 0.0}));
}

TEST_CASE("eval matches direct arithmetic") {
    REQUIRE(eval(McMullenMap(3, {0.0, 0.0}), {2.0, 0.0}) == complexd{8.0, 0.0});

    const complexd v = eval(McMullenMap(3, {0.01, 0.0}), {1.0, 0.0});
    REQUIRE_THAT(v.real(), WithinAbs(1.01, 1e-15));
    REQUIRE_THAT(v.imag(), WithinAbs(0.0, 1e-15));

    // i^4 = 1, so f(i) = 1 + p
    const complexd w = eval(McMullenMap(4, {0.005, 0.0}), {0.0, 1.0});
    REQUIRE_THAT(w.real(), WithinAbs(1.005, 1e-15));
    REQUIRE_THAT(w.imag(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("pole at the origin") {
    const McMullenMap m(3, {0.01, 0.0});
    REQUIRE_THROWS_AS(eval(m, complexd{}), pole_error);
    REQUIRE_THROWS_AS(derivative(m, complexd{}), pole_error);
    // p = 0: the origin is a regular superattracting point
    REQUIRE(eval(McMullenMap(3, {0.0, 0.0}), complexd{}) == complexd{});
}

TEST_CASE("derivative values and finite differences") {
    REQUIRE(derivative(McMullenMap(3, {0.0, 0.0}), {1.0, 0.0}) == complexd{3.0, 0.0});

    const complexd d = derivative(McMullenMap(3, {0.01, 0.0}), {1.0, 0.0});
    REQUIRE_THAT(d.real(), WithinAbs(2.97, 1e-14));

    // |Q z^{Q-1}| = Q on the unit circle
    const complexd d5 = derivative(McMullenMap(5, {0.0, 0.0}), std::polar(1.0, two_pi / 4));
    REQUIRE_THAT(std::abs(d5), WithinAbs(5.0, 1e-13));

    // central differences at h = 1e-6, relative 1e-6, on the annulus
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> rad(0.8, 1.2), ang(0.0, two_pi);
    const McMullenMap m(3, {0.02, 0.01});
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
        const complexd z = std::polar(rad(rng), ang(rng));
        const complexd fd = (eval(m, z + h) - eval(m, z - h)) / (2.0 * h);
        const complexd ex = derivative(m, z);
        REQUIRE(std::abs(fd - ex) <= 1e-6 * std::abs(ex));
    }
}

TEST_CASE("orbit multiplier") {
    SECTION("fixed point of z^3") {
        const Orbit o = orbit_multiplier(McMullenMap(3, {0.0, 0.0}), {1.0, 0.0}, 2);
        REQUIRE(o.points.size() == 2);
        REQUIRE_THAT(o.multiplier.real(), WithinAbs(9.0, 1e-12));
        REQUIRE_THAT(o.log_abs_multiplier, WithinAbs(std::log(9.0), 1e-13));
    }
    SECTION("modulus Q^n on the invariant circle") {
        const Orbit o =
            orbit_multiplier(McMullenMap(3, {0.0, 0.0}), std::polar(1.0, two_pi / 8), 2);
        REQUIRE_THAT(std::abs(o.multiplier), WithinAbs(9.0, 1e-12));
    }
    SECTION("orbit through the pole") {
        REQUIRE_THROWS_AS(orbit_multiplier(McMullenMap(3, {0.5, 0.0}), complexd{}, 1),
                          pole_error);
    }
}

TEST_CASE("outer inverse branch") {
    SECTION("p = 0 reduces to Q-th roots") {
        const McMullenMap m(3, {0.0, 0.0});
        const complexd r = std::polar(1.0, two_pi / 3);
        REQUIRE(std::abs(outer_inverse_branch(m, {1.0, 0.0}, r) - r) < 1e-14);
        REQUIRE(std::abs(outer_inverse_branch(m, {1.0, 0.0}, {1.0, 0.0}) - complexd{1.0, 0.0}) <
                1e-14);
    }
    SECTION("perturbed preimage verified by forward evaluation") {
        const McMullenMap m(3, {0.01, 0.0});
        const complexd z = outer_inverse_branch(m, {1.0, 0.0}, {1.0, 0.0});
        REQUIRE(std::abs(eval(m, z) - complexd{1.0, 0.0}) <= 1e-12);
        REQUIRE(std::abs(z - complexd{1.0, 0.0}) < 0.02); // O(p) of the hint
    }
    SECTION("round trip through eval") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> rad(0.5, 2.0), ang(0.0, two_pi);
        const McMullenMap m(3, {0.03, -0.02});
        for (int k = 0; k < 200; ++k) {
            const complexd z = std::polar(rad(rng), ang(rng));
            const complexd w = eval(m, z);
            if (std::abs(w * w - 4.0 * m.p) < 1e-6) continue; // keep off the critical set
            const complexd z2 = outer_inverse_branch(m, w, z);
            REQUIRE(std::abs(eval(m, z2) - w) <= 1e-12 * std::max(1.0, std::abs(w)));
        }
    }
    SECTION("branch point is rejected") {
        const McMullenMap m(3, {0.01, 0.0});
        const complexd w = 2.0 * std::sqrt(complexd{0.01, 0.0});
        REQUIRE_THROWS_AS(outer_inverse_branch(m, w, {1.0, 0.0}), branch_point_error);
    }
    SECTION("equidistant hint is rejected") {
        // hint on the bisector between two fourth roots of unity
        const McMullenMap m(4, {0.0, 0.0});
        REQUIRE_THROWS_AS(outer_inverse_branch(m, {1.0, 0.0}, std::polar(1.0, two_pi / 8)),
                          ambiguous_root_error);
    }
    SECTION("zero hint is a usage error") {
        REQUIRE_THROWS_AS(
            outer_inverse_branch(McMullenMap(3, {0.0, 0.0}), {1.0, 0.0}, complexd{}),
            std::invalid_argument);
    }
}

TEST_CASE("conjugation symmetry is exact") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> rad(0.5, 1.5), ang(0.0, two_pi);
    for (int k = 0; k < 100; ++k) {
        const complexd z = std::polar(rad(rng), ang(rng));
        const complexd p{0.013, 0.007};
        const complexd lhs = std::conj(eval(McMullenMap(5, p), std::conj(z)));
        const complexd rhs = eval(McMullenMap(5, std::conj(p)), z);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("rotation symmetry of the parameter") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> rad(0.8, 1.2), ang(0.0, two_pi);

    SECTION("odd Q: second iterates commute with the rotation pair") {
        for (int Q : {3, 5}) {
            const complexd p{0.02, 0.01};
            const complexd omega = std::polar(1.0, two_pi / (Q - 1));
            const complexd rho = std::polar(1.0, two_pi / (2 * (Q - 1)));
            const McMullenMap mp(Q, p), mr(Q, omega * p);
            for (int k = 0; k < 50; ++k) {
                const complexd z = std::polar(rad(rng), ang(rng));
                const complexd lhs = eval(mr, eval(mr, rho * z));
                const complexd rhs = rho * eval(mp, eval(mp, z));
                REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
    SECTION("even Q: z -> -rho z conjugates f_p to f_{omega p} directly") {
        const int Q = 4;
        const complexd p{0.02, 0.01};
        const complexd omega = std::polar(1.0, two_pi / (Q - 1));
        const complexd rho = std::polar(1.0, two_pi / (2 * (Q - 1)));
        const McMullenMap mp(Q, p), mr(Q, omega * p);
        for (int k = 0; k < 50; ++k) {
            const complexd z = std::polar(rad(rng), ang(rng));
            const complexd lhs = eval(mr, -rho * z);
            const complexd rhs = -rho * eval(mp, z);
            REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}
