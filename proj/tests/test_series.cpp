#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "mcdim/series.hpp"

using namespace mcdim;
using Catch::Matchers::WithinAbs;

namespace {

const double two_pi = 2.0 * 3.141592653589793238462643;

complexd to_std(cpx<double> z) { return {z.re, z.im}; }

// Independent oracle: U2 as the literal double sum of phi evaluations,
// no factoring.
complexd u2_direct(double t, int Q, const TruncatedSeries& tr) {
    complexd s1{0.0, 0.0};
    for (int l1 = 1; l1 <= tr.L2; ++l1)
        for (int l2 = 1; l2 <= tr.L2; ++l2) {
            const double x = (std::pow(double(Q), l1) + std::pow(double(Q), l2)) * 2.0 * t;
            s1 += std::pow(double(Q), -(l1 + l2)) * to_std(phi(std::fmod(x, 1.0), Q, tr));
        }
    complexd s2{0.0, 0.0};
    for (int l = 1; l <= tr.L2; ++l) {
        const double x = (std::pow(double(Q), l) + Q) * 2.0 * t;
        s2 += std::pow(double(Q), -l) * to_std(phi(std::fmod(x, 1.0), Q, tr));
    }
    return (Q * (Q - 1) / 2.0) * s1 + double(Q) * s2;
}

} // namespace

TEST_CASE("phi closed values and tail bound") {
    TruncatedSeries tr{60, 60};
    // geometric series at t = 0: -1/(Q-1)
    REQUIRE_THAT(to_std(phi(0.0, 3, tr)).real(), WithinAbs(-0.5, 1e-15));
    REQUIRE_THAT(to_std(phi(0.0, 3, tr)).imag(), WithinAbs(0.0, 1e-15));

    TruncatedSeries tr40{40, 40};
    REQUIRE_THAT(to_std(phi(0.0, 5, tr40)).real(), WithinAbs(-0.25, 1e-15));
    REQUIRE(tr40.phi_tail(5) < 1e-20);

    // double-precision residual of the defining equation (exact check in quad
    // precision lives in the identity suite)
    for (double t : {0.1, 0.37, 0.77}) {
        const complexd lhs = to_std(phi(3.0 * t, 3, tr40)) - 3.0 * to_std(phi(t, 3, tr40));
        const complexd rhs = std::polar(1.0, -two_pi * t);
        REQUIRE(std::abs(lhs - rhs) < 1e-14);
    }

    // rational-angle evaluation agrees with the real-angle chain
    const complexd a = to_std(phi_rational<double>(3, 10, 3, tr40));
    const complexd b = to_std(phi(0.3, 3, tr40));
    REQUIRE(std::abs(a - b) < 1e-13);
}

TEST_CASE("U1 values and periodicity") {
    TruncatedSeries tr{40, 40};
    REQUIRE_THAT(to_std(U1(0.0, 3, tr)).real(), WithinAbs(-0.5, 1e-13));
    REQUIRE_THAT(to_std(U1(0.0, 4, tr)).real(), WithinAbs(-1.0 / 3.0, 1e-13));
    for (double t : {1.0 / 3.0, 0.21}) {
        REQUIRE(std::abs(to_std(U1(t, 3, tr)) - to_std(U1(t + 1.0, 3, tr))) < 1e-13);
    }
}

TEST_CASE("U2 values, periodicity, and the factored form") {
    TruncatedSeries tr{40, 40};
    // all phi factors collapse to -1/(Q-1) at t = 0: U2(0) = -3Q / (2 (Q-1)^2)
    REQUIRE_THAT(to_std(U2(0.0, 3, tr)).real(), WithinAbs(-1.125, 1e-12));
    REQUIRE_THAT(to_std(U2(0.0, 5, tr)).real(), WithinAbs(-15.0 / 32.0, 1e-12));
    REQUIRE_THAT(to_std(U2(0.0, 3, tr)).imag(), WithinAbs(0.0, 1e-12));

    REQUIRE(std::abs(to_std(U2(0.4, 3, tr)) - to_std(U2(1.4, 3, tr))) < 1e-12);

    TruncatedSeries small{8, 8};
    for (double t : {0.137, 0.618, 0.25, 0.9}) {
        const complexd lib = to_std(U2(t, 3, small));
        const complexd direct = u2_direct(t, 3, small);
        REQUIRE(std::abs(lib - direct) < 1e-13);
    }
}

TEST_CASE("boundary series") {
    TruncatedSeries tr{40, 40};
    REQUIRE(std::abs(boundary_series(0.0, McMullenMap(3, {0.0, 0.0}), tr) -
                     complexd{1.0, 0.0}) < 1e-15);
    // 1 + 0.05 (-1/2) + 0.0025 (-9/8)
    const complexd v = boundary_series(0.0, McMullenMap(3, {0.05, 0.0}), tr);
    REQUIRE_THAT(v.real(), WithinAbs(0.9721875, 1e-12));
    REQUIRE_THAT(v.imag(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("dimension prediction closed form") {
    REQUIRE(predict_dimension(3, {0.0, 0.0}).D == 1.0);
    REQUIRE_THAT(predict_dimension(3, {0.1, 0.0}).D, WithinAbs(1.0091023922666, 1e-12));
    // depends on |p| only
    REQUIRE_THAT(predict_dimension(5, {0.0, 0.1}).D, WithinAbs(1.0062133492655, 1e-12));
    REQUIRE(predict_dimension(5, {0.0, 0.1}).method == DimMethod::series_prediction);
}

TEST_CASE("average over periodic angles") {
    // m = 8 = Q^n - 1: every character value is 1
    const complexd one = average([](double t) { return std::polar(1.0, two_pi * 8.0 * t); }, 2, 3);
    REQUIRE_THAT(one.real(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(one.imag(), WithinAbs(0.0, 1e-12));

    const complexd zero = average([](double t) { return std::polar(1.0, two_pi * 3.0 * t); }, 2, 3);
    REQUIRE(std::abs(zero) < 1e-12);

    const complexd c = average([](double) { return complexd{1.0, 0.0}; }, 2, 3);
    REQUIRE_THAT(c.real(), WithinAbs(1.0, 1e-15));

    // exact-index route matches
    REQUIRE(std::abs(character_average(8, 2, 3) - complexd{1.0, 0.0}) < 1e-13);
    REQUIRE(std::abs(character_average(3, 2, 3)) < 1e-13);
}

TEST_CASE("A and B combinations") {
    TruncatedSeries tr{40, 40};
    // A0(0) = (Q-1)(-1/(Q-1)) - 1 = -2 for every Q
    REQUIRE(std::abs(to_std(A_term(0.0, 0, 3, tr)) - complexd{-2.0, 0.0}) < 1e-12);
    REQUIRE(std::abs(to_std(A_term(0.0, 0, 5, tr)) - complexd{-2.0, 0.0}) < 1e-12);

    // composition property A_m(t) = A_0(Q^m t)
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int m = 0; m <= 4; ++m) {
        for (int k = 0; k < 10; ++k) {
            const double t = uni(rng);
            const complexd lhs = to_std(A_term(t, m, 3, tr));
            const complexd rhs =
                to_std(A_term(std::fmod(std::pow(3.0, m) * t, 1.0), 0, 3, tr));
            REQUIRE(std::abs(lhs - rhs) < 1e-11);
        }
    }

    // B0(0) at D = 1, Q = 3: 2*4*(1/4) + 2*14*(1/2) + 8*(9/8) + 3 = 28
    REQUIRE(std::abs(to_std(B_term(0.0, 0, 3, 1.0, tr)) - complexd{28.0, 0.0}) < 1e-10);
}

TEST_CASE("divisibility predicates") {
    // u = ns cases
    REQUIRE(divisibility_geometric(6, 3, 3));
    REQUIRE_FALSE(divisibility_geometric(4, 3, 3));
    REQUIRE_FALSE(divisibility_2Qv(5, 8, 3));

    // against direct 128-bit remainders (full sweep lives in the identity suite)
    for (int q : {3, 5}) {
        const std::int64_t M = checked_pow_i64(q, 5) - 1;
        for (int u = 0; u <= 12; ++u) {
            __int128 qu = 1;
            for (int i = 0; i < u; ++i) qu *= q;
            REQUIRE(divisibility_geometric(u, 5, q) == (((qu - 1) % M) == 0));
            for (int v = 0; v <= 12; ++v) {
                __int128 qv = 1;
                for (int i = 0; i < v; ++i) qv *= q;
                REQUIRE(divisibility_2Qv(v, 5, q) == ((2 * qv % M) == 0));
                REQUIRE(divisibility_2Qv_u(u, v, 5, q) == ((2 * qv * (qu + 1) % M) == 0));
            }
        }
    }

    // small n where the quantity really is an integer
    REQUIRE(divisibility_2Qv(1, 1, 3)); // 2*3 over 3-1
}

TEST_CASE("finite geometric double sums match their closed forms") {
    for (int q : {3, 4, 5})
        for (int n = 1; n <= 30; ++n)
            for (bool strict : {false, true})
                REQUIRE_THAT(geometric_double_sum(n, q, strict),
                             WithinAbs(geometric_double_sum_closed(n, q, strict), 1e-12));
}

TEST_CASE("appendix double sum of A-term correlations") {
    TruncatedSeries tr{30, 30};
    // the correlation sum collapses to exactly 4n: the diagonal pairing
    // contributes n, the unit characters n, and the cross terms 2n, with the
    // off-lattice characters averaging to zero at these periods
    const double s6 = sum_AmAk(6, 3, tr);
    REQUIRE(s6 / 6.0 > 3.5);
    REQUIRE(s6 / 6.0 < 4.5);
    REQUIRE_THAT(s6, WithinAbs(24.0, 1e-9));

    const double s6q5 = sum_AmAk(6, 5, tr);
    REQUIRE_THAT(s6q5, WithinAbs(24.0, 1e-9));
}
