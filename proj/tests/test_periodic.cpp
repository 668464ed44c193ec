#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcdim/csv.hpp"
#include "mcdim/periodic.hpp"
#include "mcdim/series.hpp"

using namespace mcdim;
using Catch::Matchers::WithinAbs;

namespace {

const double two_pi = 2.0 * 3.141592653589793238462643;

// real fixed point of x^Q + p/x^Q = x on (0.9, 1.2), by bisection
double real_fixed_point_oracle(int Q, double p) {
    auto g = [&](double x) { return std::pow(x, Q) + p / std::pow(x, Q) - x; };
    double lo = 0.9, hi = 1.2;
    REQUIRE(g(lo) < 0.0);
    REQUIRE(g(hi) > 0.0);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("boundary angles") {
    const BoundaryAngle a = boundary_angle(3, 5, 2);
    REQUIRE(a.den == 8);
    REQUIRE_THAT(a.t(), WithinAbs(0.625, 1e-16));
    REQUIRE_THROWS_AS(boundary_angle(3, 8, 2), std::invalid_argument);

    // multiplication by Q permutes the angle lattice
    for (std::int64_t j = 0; j < 8; ++j) {
        const double lhs = std::fmod(3.0 * boundary_angle(3, j, 2).t(), 1.0);
        const double rhs = boundary_angle(3, (3 * j) % 8, 2).t();
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-15));
    }
}

TEST_CASE("locate at p = 0 reproduces roots of unity") {
    const McMullenMap m(3, {0.0, 0.0});
    const auto fix = locate(m, boundary_angle(3, 0, 1));
    REQUIRE(std::abs(fix.z - complexd{1.0, 0.0}) < 1e-14);
    REQUIRE(std::abs(fix.multiplier - complexd{3.0, 0.0}) < 1e-12);

    const auto p2 = locate(m, boundary_angle(3, 1, 2));
    REQUIRE(std::abs(p2.z - std::polar(1.0, two_pi / 8)) < 1e-13);
    REQUIRE_THAT(std::abs(p2.multiplier), WithinAbs(9.0, 1e-10));
}

TEST_CASE("locate finds the real repelling fixed point") {
    const double p = 0.05;
    const double root = real_fixed_point_oracle(3, p);
    const auto fix = locate(McMullenMap(3, {p, 0.0}), boundary_angle(3, 0, 1));
    REQUIRE_THAT(fix.z.real(), WithinAbs(root, 1e-10));
    REQUIRE_THAT(fix.z.imag(), WithinAbs(0.0, 1e-12));
    REQUIRE(std::abs(fix.multiplier) > 1.0);
    // the perturbation pulls the fixed point inside the unit circle
    // (z ~ 1 - p/2 + O(p^2)), matching the series head
    REQUIRE(fix.z.real() < 1.0);
    REQUIRE_THAT(fix.z.real(), WithinAbs(1.0 - 0.5 * p, 5e-3));
}

TEST_CASE("locate rejects out-of-regime parameters") {
    REQUIRE_THROWS_AS(locate(McMullenMap(3, {0.5, 0.0}), boundary_angle(3, 0, 1)),
                      regime_error);
}

TEST_CASE("enumerate at p = 0 is exact") {
    SECTION("eighth roots of unity at Q = 3, n = 2") {
        const auto pts = enumerate(McMullenMap(3, {0.0, 0.0}), 2);
        REQUIRE(pts.size() == 8);
        for (std::int64_t j = 0; j < 8; ++j) {
            REQUIRE(std::abs(pts[j].z - std::polar(1.0, two_pi * j / 8.0)) < 1e-12);
            REQUIRE(std::abs(std::abs(pts[j].multiplier) - 9.0) < 9.0 * 1e-10);
        }
    }
    SECTION("cube roots of unity at Q = 4, n = 1") {
        const auto pts = enumerate(McMullenMap(4, {0.0, 0.0}), 1);
        REQUIRE(pts.size() == 3);
        for (std::int64_t j = 0; j < 3; ++j)
            REQUIRE(std::abs(pts[j].z - std::polar(1.0, two_pi * j / 3.0)) < 1e-12);
    }
}

TEST_CASE("enumerate in the perturbed regime") {
    const McMullenMap m(3, {0.05, 0.0});
    const int n = 6;
    const auto pts = enumerate(m, n);
    REQUIRE(pts.size() == 728);

    const auto stats = point_stats(m, pts);
    REQUIRE(stats.max_radial_deviation < 0.1);
    REQUIRE(stats.min_log_abs_multiplier > 0.0);
    REQUIRE(stats.max_residual <= 1e-10);
    REQUIRE(stats.radial_constant < 1.0); // | |z| - 1 | <= C |p| with moderate C

    // forward closure: f maps the point at j to the point at Qj mod (Q^n - 1)
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const complexd img = eval(m, pts[j].z);
        const complexd expect = pts[(3 * j) % 728].z;
        REQUIRE(std::abs(img - expect) < 1e-8);
    }
}

TEST_CASE("enumerate rejects an oversized lattice") {
    EnumerateOptions opt;
    opt.cap = 100;
    REQUIRE_THROWS_AS(enumerate(McMullenMap(3, {0.0, 0.0}), 5, opt), std::invalid_argument);
}

TEST_CASE("holomorphic-motion continuity in the parameter") {
    const int n = 4;
    const auto a = enumerate(McMullenMap(3, {0.03, 0.0}), n);
    const auto b = enumerate(McMullenMap(3, {0.031, 0.0}), n);
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        worst = std::max(worst, std::abs(a[j].z - b[j].z));
    const double motion_constant = worst / 0.001;
    REQUIRE(motion_constant < 2.0);
    REQUIRE(motion_constant > 0.0);
}

TEST_CASE("located points track the second-order series") {
    const TruncatedSeries tr{40, 40};
    const int n = 5; // 242 angles
    double max_err_1 = 0.0, max_err_2 = 0.0;
    for (int which : {0, 1}) {
        const double p = which == 0 ? 0.01 : 0.02;
        const McMullenMap m(3, {p, 0.0});
        const auto pts = enumerate(m, n);
        double worst = 0.0;
        for (const auto& bp : pts) {
            const complexd s = boundary_series(bp.angle.t(), m, tr);
            worst = std::max(worst, std::abs(bp.z - s));
        }
        (which == 0 ? max_err_1 : max_err_2) = worst;
    }
    // third-order remainder: errors ~ C |p|^3 with C uniform over the angles
    REQUIRE(max_err_2 / (0.02 * 0.02 * 0.02) < 50.0);
    const double ratio = max_err_2 / max_err_1;
    REQUIRE(ratio > 6.0);
    REQUIRE(ratio < 10.0);
}

TEST_CASE("points CSV dump round-trips") {
    const auto pts = enumerate(McMullenMap(3, {0.02, 0.01}), 2);
    const std::string path = "points_test.csv";
    write_points_csv(path, pts);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header, line1;
    std::getline(in, header);
    REQUIRE(header ==
            "j,n,t_num,t_den,z_re,z_im,mult_re,mult_im,log_abs_mult,residual");
    std::getline(in, line1);
    std::stringstream ss(line1);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 10);
    REQUIRE(fields[0] == "0");
    REQUIRE(std::strtod(fields[4].c_str(), nullptr) == pts[0].z.real());
    REQUIRE(std::strtod(fields[5].c_str(), nullptr) == pts[0].z.imag());
    std::remove(path.c_str());
}
