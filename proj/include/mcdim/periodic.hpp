#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "mcdim/errors.hpp"
#include "mcdim/map.hpp"
#include "mcdim/modular.hpp"
#include "mcdim/parallel.hpp"

namespace mcdim {

// Angle t_j = j / (Q^n - 1). Multiplication by Q permutes these indices:
// Q t_j = t_{Qj mod (Q^n - 1)} mod 1.
struct BoundaryAngle {
    std::int64_t j;
    int n;
    std::int64_t den; // Q^n - 1

    double t() const { return static_cast<double>(j) / static_cast<double>(den); }
};

inline BoundaryAngle boundary_angle(int Q, std::int64_t j, int n) {
    if (n < 1) throw std::invalid_argument("boundary_angle: n must be >= 1");
    const std::int64_t den = checked_pow_i64(Q, n) - 1;
    if (j < 0 || j >= den) throw std::invalid_argument("boundary_angle: j out of range");
    return {j, n, den};
}

struct BoundaryPeriodicPoint {
    BoundaryAngle angle;
    complexd z;
    complexd multiplier;
    double log_abs_multiplier;
    double residual; // |f^n(z) - z| achieved
};

struct LocateOptions {
    double tol = 1e-12;
    int max_passes = 200;
    double p_bound = 0.1; // supported |p| regime; an engineering bound, configurable
};

// Finds z(t_j) as the fixed point of the n-fold inverse-branch cycle. The
// cycle contracts with ratio ~ Q^-n, so a handful of passes reach tol; the
// forward map would amplify error by ~ Q^n instead. Branch hints are the
// p = 0 orbit points e^{2 pi i Q^m t_j}, never updated: for small |p| the true
// orbit stays within O(|p|) of them, far from the branch-choice boundary.
//
// The multiplier is evaluated on the orbit points recorded during the last
// inverse pass; each carries O(tol) error independently, whereas re-iterating
// the located point forward would smear error by ~ Q^m into z(Q^m t).
// unit_roots, when given, must hold e^{2 pi i r / den} for r = 0..den-1.
inline BoundaryPeriodicPoint locate(const McMullenMap& map, const BoundaryAngle& a,
                                    const LocateOptions& opt = {},
                                    const std::vector<complexd>* unit_roots = nullptr) {
    if (std::abs(map.p) > opt.p_bound)
        throw regime_error("locate: |p| above the supported small-p bound");

    const int n = a.n;
    const double two_pi = 2.0 * 3.141592653589793238462643;
    // scratch reused across calls; enumerate hits this once per angle
    static thread_local std::vector<complexd> hints, orbit;
    hints.resize(static_cast<std::size_t>(n));
    orbit.resize(static_cast<std::size_t>(n));
    std::int64_t ix = a.j % a.den;
    for (int m = 0; m < n; ++m) {
        hints[static_cast<std::size_t>(m)] =
            unit_roots
                ? (*unit_roots)[static_cast<std::size_t>(ix)]
                : std::polar(1.0, two_pi * (static_cast<double>(ix) / static_cast<double>(a.den)));
        ix = mod_mul(map.Q, ix, a.den);
    }
    complexd z = hints[0];
    bool converged = false;
    for (int pass = 0; pass < opt.max_passes && !converged; ++pass) {
        complexd w = z;
        for (int m = n - 1; m >= 0; --m) {
            w = outer_inverse_branch(map, w, hints[static_cast<std::size_t>(m)]);
            orbit[static_cast<std::size_t>(m)] = w;
        }
        converged = std::abs(w - z) < opt.tol;
        z = w;
    }
    if (!converged)
        throw convergence_error(
            "locate: inverse-branch cycle failed to contract (p outside the safe regime?)");

    // |mult| as a running product of squared moduli, folded into log space
    // before it can leave the double range
    complexd mult{1.0, 0.0};
    double log_mult = 0.0;
    double prod2 = 1.0;
    for (int m = 0; m < n; ++m) {
        const complexd d = derivative(map, orbit[static_cast<std::size_t>(m)]);
        mult *= d;
        prod2 *= std::norm(d);
        if (prod2 > 1e280 || prod2 < 1e-280) {
            log_mult += 0.5 * std::log(prod2);
            prod2 = 1.0;
        }
    }
    log_mult += 0.5 * std::log(prod2);

    complexd fz = z;
    for (int m = 0; m < n; ++m) fz = eval(map, fz);
    return {a, z, mult, log_mult, std::abs(fz - z)};
}

struct EnumerateOptions {
    LocateOptions locate{};
    std::int64_t cap = 10'000'000; // largest supported Q^n - 1
    int workers = 0;
};

// Near-collision scan. Points are bucketed by real part with bucket width
// >= min_sep, so any pair closer than min_sep shares a bucket or sits in
// adjacent ones; expected linear time.
inline void check_min_separation(const std::vector<BoundaryPeriodicPoint>& pts,
                                 double min_sep) {
    const std::size_t n = pts.size();
    if (n < 2) return;
    double xmin = pts[0].z.real(), xmax = xmin;
    for (const auto& bp : pts) {
        xmin = std::min(xmin, bp.z.real());
        xmax = std::max(xmax, bp.z.real());
    }
    const double width = std::max((xmax - xmin) / static_cast<double>(n), min_sep);
    const std::size_t nb = static_cast<std::size_t>((xmax - xmin) / width) + 2;

    const auto bucket_of = [&](double x) {
        const auto b = static_cast<std::size_t>((x - xmin) / width);
        return std::min(b, nb - 1);
    };
    std::vector<std::uint32_t> counts(nb + 1, 0);
    for (const auto& bp : pts) ++counts[bucket_of(bp.z.real()) + 1];
    for (std::size_t b = 1; b <= nb; ++b) counts[b] += counts[b - 1];
    std::vector<std::uint32_t> order(n);
    {
        std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
        for (std::size_t i = 0; i < n; ++i)
            order[cursor[bucket_of(pts[i].z.real())]++] = static_cast<std::uint32_t>(i);
    }

    const double sep2 = min_sep * min_sep;
    const auto collide = [&](std::uint32_t a, std::uint32_t b) {
        return std::norm(pts[a].z - pts[b].z) <= sep2;
    };
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = counts[b], hi = counts[b + 1];
        const std::size_t hi2 = (b + 1 < nb) ? counts[b + 2] : hi;
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t k = i + 1; k < hi2; ++k) {
                if (collide(order[i], order[k]))
                    throw duplicate_point_error(
                        "enumerate: located points collapsed (leaving the Cantor-circle regime?)");
            }
        }
    }
}

// All Q^n - 1 period-n points on the outer boundary, sorted by angle index j.
inline std::vector<BoundaryPeriodicPoint> enumerate(const McMullenMap& map, int n,
                                                    const EnumerateOptions& opt = {}) {
    const std::int64_t den = checked_pow_i64(map.Q, n) - 1;
    if (den > opt.cap) throw std::invalid_argument("enumerate: Q^n - 1 exceeds configured cap");

    // shared hint table: every locate draws its branch hints from these roots
    const double two_pi = 2.0 * 3.141592653589793238462643;
    std::vector<complexd> unit_roots(static_cast<std::size_t>(den));
    parallel_for_blocks(den, opt.workers, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r)
            unit_roots[static_cast<std::size_t>(r)] =
                std::polar(1.0, two_pi * (static_cast<double>(r) / static_cast<double>(den)));
    });

    std::vector<BoundaryPeriodicPoint> pts(static_cast<std::size_t>(den));
    parallel_for_blocks(den, opt.workers, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t j = lo; j < hi; ++j)
            pts[static_cast<std::size_t>(j)] =
                locate(map, BoundaryAngle{j, n, den}, opt.locate, &unit_roots);
    });

    check_min_separation(pts, 10.0 * opt.locate.tol);
    for (const auto& bp : pts)
        if (!(bp.log_abs_multiplier > 0.0))
            throw regime_error("enumerate: non-repelling cycle found");
    return pts;
}

struct PointSetStats {
    double max_radial_deviation; // max | |z| - 1 |
    double radial_constant;      // the C in | |z| - 1 | <= C |p| (0 when p = 0)
    double max_residual;
    double min_log_abs_multiplier;
    double max_motion_constant; // filled by callers comparing two parameter values
};

inline PointSetStats point_stats(const McMullenMap& map,
                                 const std::vector<BoundaryPeriodicPoint>& pts) {
    PointSetStats s{0.0, 0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& bp : pts) {
        s.max_radial_deviation = std::max(s.max_radial_deviation, std::abs(std::abs(bp.z) - 1.0));
        s.max_residual = std::max(s.max_residual, bp.residual);
        s.min_log_abs_multiplier = std::min(s.min_log_abs_multiplier, bp.log_abs_multiplier);
    }
    const double ap = std::abs(map.p);
    s.radial_constant = ap > 0.0 ? s.max_radial_deviation / ap : 0.0;
    return s;
}

} // namespace mcdim
