#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "mcdim/errors.hpp"

namespace mcdim {

using complexd = std::complex<double>;

// f_p(z) = z^Q + p / z^Q with Q >= 3. p = 0 is allowed (the unperturbed power map).
struct McMullenMap {
    int Q;
    complexd p;

    McMullenMap(int q, complexd pp) : Q(q), p(pp) {
        if (q < 3) throw std::invalid_argument("McMullenMap: Q must be >= 3");
    }
};

// Integer power by repeated squaring. Keeps conjugation symmetry exact
// (no polar round trip) and is cheap for the small exponents used here.
inline complexd ipow(complexd z, int k) {
    complexd r{1.0, 0.0};
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

inline complexd eval(const McMullenMap& m, complexd z) {
    if (z == complexd{}) {
        if (m.p == complexd{}) return {};
        throw pole_error("eval: z = 0 is a pole of f_p for p != 0");
    }
    const complexd zq = ipow(z, m.Q);
    if (m.p == complexd{}) return zq;
    return zq + m.p / zq;
}

// f_p'(z) = Q (z^{Q-1} - p / z^{Q+1})
inline complexd derivative(const McMullenMap& m, complexd z) {
    if (z == complexd{}) {
        if (m.p == complexd{}) return {}; // Q z^{Q-1} vanishes at 0 for Q >= 3
        throw pole_error("derivative: z = 0 is a pole of f_p' for p != 0");
    }
    const complexd zq1 = ipow(z, m.Q - 1);
    if (m.p == complexd{}) return static_cast<double>(m.Q) * zq1;
    return static_cast<double>(m.Q) * (zq1 - m.p / (zq1 * z * z));
}

struct Orbit {
    std::vector<complexd> points; // z_0 .. z_{n-1}
    complexd multiplier;          // prod_m f'(z_m)
    double log_abs_multiplier;    // sum_m log|f'(z_m)|; |multiplier| ~ Q^n, so stay in logs
};

inline Orbit orbit_multiplier(const McMullenMap& m, complexd z0, int n) {
    Orbit o;
    o.points.reserve(static_cast<std::size_t>(n));
    o.multiplier = complexd{1.0, 0.0};
    o.log_abs_multiplier = 0.0;
    complexd z = z0;
    for (int i = 0; i < n; ++i) {
        const complexd d = derivative(m, z);
        o.points.push_back(z);
        o.multiplier *= d;
        o.log_abs_multiplier += std::log(std::abs(d));
        z = eval(m, z);
    }
    return o;
}

// Preimage of w under f_p on the outer sheet. z^Q solves X^2 - wX + p = 0;
// "outer" is the root of larger modulus, the one continuous to z^Q = w as
// p -> 0 (roots multiply to p, so the other root collapses to the pole).
// Among the Q-th roots of that X, the one nearest the hint in the plane is
// returned; nearest-argument selection would wrap around for hints near the
// branch cut.
inline complexd outer_inverse_branch(const McMullenMap& m, complexd w, complexd hint) {
    if (hint == complexd{})
        throw std::invalid_argument("outer_inverse_branch: hint must be nonzero");

    complexd X;
    if (m.p == complexd{}) {
        X = w;
    } else {
        const complexd disc = w * w - 4.0 * m.p;
        const double scale =
            std::max({std::norm(w), 4.0 * std::abs(m.p), std::numeric_limits<double>::min()});
        if (std::abs(disc) <= 1e-26 * scale)
            throw branch_point_error("outer_inverse_branch: w^2 = 4p (critical value)");
        complexd sq = std::sqrt(disc);
        // Sign choice avoids cancellation; the sum root is the larger one.
        if (std::real(std::conj(w) * sq) < 0.0) sq = -sq;
        const complexd big = 0.5 * (w + sq);
        const complexd small = m.p / big;
        X = big;
        // Near-equal moduli: fall back to the root closer to w.
        if (std::abs(small) > (1.0 - 1e-9) * std::abs(big) &&
            std::abs(small - w) < std::abs(big - w))
            X = small;
    }

    if (X == complexd{}) return {}; // only for w = p = 0

    // One accurate Q-th root. Newton on z^Q = X seeded from the hint stays in
    // transcendental-free arithmetic on the hot path; the polar construction
    // is the fallback when the hint is far off.
    complexd root{};
    bool have_root = false;
    if (std::norm(hint) > 1e-100) {
        complexd z = hint;
        for (int it = 0; it < 16; ++it) {
            const complexd zq1 = ipow(z, m.Q - 1);
            const complexd zq = zq1 * z;
            const complexd denom = static_cast<double>(m.Q) * zq1;
            const double dn = std::norm(denom);
            if (dn < 1e-280) break;
            const complexd delta = (zq - X) * std::conj(denom) / dn;
            z -= delta;
            if (std::norm(delta) <= 1e-28 * std::norm(z)) {
                have_root = true;
                break;
            }
        }
        if (have_root) {
            const double ax2 = std::max(1.0, std::norm(X));
            have_root = std::norm(ipow(z, m.Q) - X) <= 2.5e-25 * ax2; // |z^Q - X| <= 5e-13 scale
            root = z;
        }
    }
    if (!have_root)
        root = std::polar(std::pow(std::abs(X), 1.0 / m.Q), std::arg(X) / m.Q);

    // all Q-th roots are rotations of this one; pick the one nearest the hint
    static thread_local int rot_Q = 0;
    static thread_local complexd rot_cached;
    if (rot_Q != m.Q) {
        const double step_angle = 2.0 * 3.141592653589793238462643 / m.Q;
        rot_cached = {std::cos(step_angle), std::sin(step_angle)};
        rot_Q = m.Q;
    }
    const complexd rot = rot_cached;
    complexd cand = root, best = root;
    double d_best = std::numeric_limits<double>::infinity();
    double d_second = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m.Q; ++k) {
        const double d = std::norm(cand - hint);
        if (d < d_best) {
            d_second = d_best;
            d_best = d;
            best = cand;
        } else if (d < d_second) {
            d_second = d;
        }
        cand *= rot;
    }
    const double scale = std::max(std::abs(root), std::numeric_limits<double>::min());
    if (std::sqrt(d_second) - std::sqrt(d_best) <= 1e-12 * scale)
        throw ambiguous_root_error("outer_inverse_branch: two Q-th roots equidistant from hint");
    return best;
}

} // namespace mcdim
