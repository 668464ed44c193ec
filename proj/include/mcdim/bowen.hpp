#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "mcdim/dimension.hpp"
#include "mcdim/errors.hpp"
#include "mcdim/parallel.hpp"
#include "mcdim/periodic.hpp"

namespace mcdim {

// S_n(D) = sum over period-n points of |(f^n)'|^{-D}, via the stored
// log-moduli. Deterministic compensated reduction.
inline double pressure_sum(const std::vector<BoundaryPeriodicPoint>& pts, double D,
                           int workers = 0) {
    if (pts.empty()) throw std::invalid_argument("pressure_sum: empty point set");
    if (!(D > 0.0)) throw std::invalid_argument("pressure_sum: D must be positive");
    return deterministic_sum(static_cast<std::int64_t>(pts.size()), workers,
                             [&](std::int64_t i) {
                                 return std::exp(-D * pts[static_cast<std::size_t>(i)]
                                                          .log_abs_multiplier);
                             });
}

inline double pressure_sum_derivative(const std::vector<BoundaryPeriodicPoint>& pts, double D,
                                      int workers = 0) {
    return deterministic_sum(static_cast<std::int64_t>(pts.size()), workers,
                             [&](std::int64_t i) {
                                 const double l =
                                     pts[static_cast<std::size_t>(i)].log_abs_multiplier;
                                 return -l * std::exp(-D * l);
                             });
}

// S_n(D) and dS_n/dD in one pass over the points.
inline std::pair<double, double> pressure_sum_with_derivative(
    const std::vector<BoundaryPeriodicPoint>& pts, double D, int workers = 0) {
    const std::int64_t n = static_cast<std::int64_t>(pts.size());
    const std::int64_t block = 4096;
    const std::int64_t nblocks = (n + block - 1) / block;
    std::vector<double> ps(static_cast<std::size_t>(nblocks)), pd(static_cast<std::size_t>(nblocks));
    parallel_for_blocks(
        n, workers,
        [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
            kahan_sum<double> s, d;
            for (std::int64_t i = lo; i < hi; ++i) {
                const double l = pts[static_cast<std::size_t>(i)].log_abs_multiplier;
                const double e = std::exp(-D * l);
                s += e;
                d += -l * e;
            }
            ps[static_cast<std::size_t>(b)] = s.get();
            pd[static_cast<std::size_t>(b)] = d.get();
        },
        block);
    kahan_sum<double> s, d;
    for (std::size_t b = 0; b < ps.size(); ++b) {
        s += ps[b];
        d += pd[b];
    }
    return {s.get(), d.get()};
}

struct BowenOptions {
    double tol = 1e-12;
    int workers = 0;
    EnumerateOptions enumerate{};
};

// Root of S_n(D) = 1 in [0.5, 2]. All log-moduli are positive, so S_n is
// strictly decreasing and the root is unique; a short bisection brings Newton
// into its quadratic basin.
inline DimensionEstimate solve_bowen_from_points(const std::vector<BoundaryPeriodicPoint>& pts,
                                                 int n, double tol, int workers = 0) {
    // decreasing-in-D sanity grid; its endpoints double as the bracket check
    double grid_first = 0.0, grid_last = 0.0, prev = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double D = 0.5 + 1.5 * k / 9.0;
        const double s = pressure_sum(pts, D, workers);
        if (k == 0) grid_first = s;
        if (k == 9) grid_last = s;
        if (k > 0 && !(s < prev))
            throw numeric_error("solve_bowen: pressure sum not strictly decreasing in D");
        prev = s;
    }
    if (grid_first < 1.0 || grid_last > 1.0)
        throw bracket_error("solve_bowen: root of S_n(D) = 1 not bracketed by [0.5, 2]");

    double lo = 0.5, hi = 2.0;
    for (int it = 0; it < 12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pressure_sum(pts, mid, workers) > 1.0)
            lo = mid;
        else
            hi = mid;
    }

    double D = 0.5 * (lo + hi);
    double resid = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 8; ++it) {
        const auto [s, ds] = pressure_sum_with_derivative(pts, D, workers);
        resid = std::abs(s - 1.0);
        const double step = (s - 1.0) / ds;
        const double next = D - step;
        if (!(next > lo && next < hi)) break; // stay inside the verified bracket
        D = next;
        if (std::abs(step) < 1e-16) break;
    }
    resid = std::abs(pressure_sum(pts, D, workers) - 1.0);
    if (!(resid < tol))
        throw convergence_error("solve_bowen: residual above tolerance after Newton polish");

    DimensionEstimate e;
    e.D = D;
    e.n = n;
    e.bracket_lo = lo;
    e.bracket_hi = hi;
    e.residual = resid;
    e.method = DimMethod::bowen_fixed_n;
    return e;
}

inline DimensionEstimate solve_bowen(const McMullenMap& map, int n, double tol = 1e-12,
                                     const BowenOptions& opt = {}) {
    const auto pts = enumerate(map, n, opt.enumerate);
    return solve_bowen_from_points(pts, n, tol, opt.workers);
}

struct BowenSweepRow {
    int n;
    double D;        // finite-n root
    double residual; // |S_n(D) - 1| achieved
};

// Finite-n roots carry the exact p-independent lattice term
// log(1 - Q^-n) / (n log Q) -- at p = 0 the root is exactly
// 1 + that term. It is known in closed form, so it is removed before the
// 1/n fit; the remaining finite-size effects are O(1)/n and the linear model
// captures them. Fitting the raw D_n instead leaves a geometrically decaying
// component that biases the intercept by ~1e-3 at Q = 3.
inline DimensionEstimate solve_bowen_extrapolated(const McMullenMap& map, int n_min, int n_max,
                                                  double tol = 1e-12, const BowenOptions& opt = {},
                                                  std::vector<BowenSweepRow>* rows = nullptr) {
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("solve_bowen_extrapolated: bad period range");

    const double logQ = std::log(static_cast<double>(map.Q));
    std::vector<double> xs, ys;
    for (int n = n_min; n <= n_max; ++n) {
        const DimensionEstimate e = solve_bowen(map, n, tol, opt);
        if (rows) rows->push_back({n, e.D, e.residual});
        const double lattice = std::log1p(-std::pow(static_cast<double>(map.Q), -n)) / (n * logQ);
        xs.push_back(1.0 / n);
        ys.push_back(e.D - lattice);
    }

    const std::size_t m = xs.size();
    double D_inf, slope;
    if (m == 1) {
        D_inf = ys[0];
        slope = 0.0;
    } else {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= m;
        my /= m;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        slope = sxy / sxx;
        D_inf = my - slope * mx;
    }

    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (D_inf + slope * xs[i]);
        ss += r * r;
    }
    const double rms = std::sqrt(ss / m);

    DimensionEstimate e;
    e.D = D_inf;
    e.n = 0;
    e.bracket_lo = D_inf - rms;
    e.bracket_hi = D_inf + rms;
    e.residual = rms;
    e.method = DimMethod::bowen_extrapolated;
    return e;
}

// Contraction-ratio data for the iterated-function-system dimension bounds:
// b_i |x-y| <= |S_i(x) - S_i(y)| <= c_i |x-y|.
struct ContractionRatios {
    std::vector<double> lower; // b_i
    std::vector<double> upper; // c_i

    void validate() const {
        if (lower.size() != upper.size() || lower.size() < 2)
            throw std::invalid_argument("ContractionRatios: need >= 2 matched ratio pairs");
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(lower[i] > 0.0 && lower[i] <= upper[i] && upper[i] < 1.0))
                throw std::invalid_argument("ContractionRatios: need 0 < b_i <= c_i < 1");
        }
    }
};

// Ratios 1/|multiplier| scaled by distortion constants C1 <= 1 <= C2.
inline ContractionRatios ratios_from_points(const std::vector<BoundaryPeriodicPoint>& pts,
                                            double C1 = 1.0, double C2 = 1.0) {
    ContractionRatios r;
    r.lower.reserve(pts.size());
    r.upper.reserve(pts.size());
    for (const auto& bp : pts) {
        const double inv = std::exp(-bp.log_abs_multiplier);
        r.lower.push_back(C1 * inv);
        r.upper.push_back(C2 * inv);
    }
    return r;
}

enum class FalconerSide { upper, lower };

// Unique s with sum_i r_i^s = 1; the sum decreases from m >= 2 at s = 0 to 0.
inline double falconer_bound(const ContractionRatios& ratios, FalconerSide side,
                             double tol = 1e-12) {
    ratios.validate();
    const std::vector<double>& r = (side == FalconerSide::upper) ? ratios.upper : ratios.lower;

    const auto sum_pow = [&r](double s) {
        kahan_sum<double> acc;
        for (double ri : r) acc += std::exp(s * std::log(ri));
        return acc.get();
    };

    double lo = 0.0, hi = 1.0;
    while (sum_pow(hi) > 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw numeric_error("falconer_bound: no root below s = 1e4");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (sum_pow(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace mcdim
