#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mcdim/dimension.hpp"
#include "mcdim/kahan.hpp"
#include "mcdim/map.hpp"
#include "mcdim/modular.hpp"
#include "mcdim/parallel.hpp"
#include "mcdim/realops.hpp"

namespace mcdim {

struct TruncatedSeries {
    int L = 40;  // truncation of the single sums over l
    int L2 = 40; // truncation of the double sum inside U2

    // |phi - phi_L| <= sum_{l >= L} Q^{-l-1} = Q^{-L} / (Q - 1); U1 inherits the
    // same geometric tail.
    double phi_tail(int Q) const { return std::pow(double(Q), -L) / (Q - 1); }
    double u1_tail(int Q) const { return phi_tail(Q); }
    // Coarse union bound over both truncations of U2.
    double u2_tail(int Q) const { return 4.0 * std::pow(double(Q), -std::min(L, L2)); }
};

namespace detail {

template <class R>
cpx<double> demote(cpx<R> z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

inline complexd to_std(cpx<double> z) { return {z.re, z.im}; }

} // namespace detail

// phi(t) = -(1/Q) sum_{l=0}^{L-1} Q^{-l} e^{-2 pi i Q^l t}
//
// The phase chain y_{l+1} = frac(Q y_l) loses absolute accuracy like Q^l eps,
// but the term weights decay like Q^-l, so the accumulated error stays at the
// working precision.
template <class R>
cpx<R> phi(R t, int Q, const TruncatedSeries& tr) {
    const R qinv = R(1) / R(Q);
    R y = frac(t);
    R w = qinv; // Q^{-l} / Q
    cpx<R> s{};
    for (int l = 0; l < tr.L; ++l) {
        s -= w * cis2pi(-y);
        y = frac(R(Q) * y);
        w = w * qinv;
    }
    return s;
}

// phi at the exact rational angle t = num/den: phases reduced in integers,
// so no precision is lost in the argument chain.
template <class R>
cpx<R> phi_rational(std::int64_t num, std::int64_t den, int Q, const TruncatedSeries& tr) {
    const R qinv = R(1) / R(Q);
    std::int64_t ix = ((num % den) + den) % den;
    R w = qinv;
    cpx<R> s{};
    for (int l = 0; l < tr.L; ++l) {
        s -= w * cis2pi(-real_ops<R>::from_ratio(ix, den));
        ix = mod_mul(Q, ix, den);
        w = w * qinv;
    }
    return s;
}

// Shared evaluation context for U1, U2 and the A/B combinations along an
// orbit t, Qt, ..., Q^{max_offset} t. Everything reduces to the phase
// sequence E_k = e^{-4 pi i Q^k t}:
//
//   U1(Q^m t)          = -sum_{i=1}^{L} Q^{-i} E_{i+m}
//   sigma^{-2 Q^{m+1}} = E_{m+1}
//   U2(Q^m t)          = -((Q-1)/2) sum_j Q^{-j} F_{m+j}^2 - sum_j Q^{-j} F_{m+j} E_{m+j+1}
//
// with F_k = sum_{l=1}^{L2} Q^{-l} E_{k+l}. The F-form factors the double sum
// of U2 exactly (E_{a}E_{b} = e^{-4 pi i (Q^a + Q^b) t}), turning an
// O(L * L2^2) evaluation into O(L * L2).
template <class R>
class SeriesCtx {
public:
    SeriesCtx(int Q, const TruncatedSeries& tr, int max_offset, R t)
        : Q_(Q), tr_(tr), max_offset_(max_offset) {
        build_weights();
        const int K = phase_count();
        E_.reserve(K);
        R y = frac(R(2) * frac(t));
        for (int k = 0; k < K; ++k) {
            E_.push_back(cis2pi(-y));
            y = frac(R(Q) * y);
        }
    }

    SeriesCtx(int Q, const TruncatedSeries& tr, int max_offset, std::int64_t num,
              std::int64_t den)
        : Q_(Q), tr_(tr), max_offset_(max_offset) {
        build_weights();
        const int K = phase_count();
        E_.reserve(K);
        std::int64_t ix = (((2 * num) % den) + den) % den;
        for (int k = 0; k < K; ++k) {
            E_.push_back(cis2pi(-real_ops<R>::from_ratio(ix, den)));
            ix = mod_mul(Q_, ix, den);
        }
    }

    int degree() const { return Q_; }
    const TruncatedSeries& truncation() const { return tr_; }

    cpx<R> U1m(int m) const {
        cpx<R> s{};
        for (int i = 1; i <= tr_.L; ++i) s -= qinv_[i] * E_[i + m];
        return s;
    }

    cpx<R> U2m(int m) const {
        build_F();
        const R half = R(Q_ - 1) / R(2);
        cpx<R> sa{}, sb{};
        for (int j = 0; j < tr_.L; ++j) {
            const cpx<R> f = F_[m + j];
            sa += qinv_[j] * (f * f);
            sb += qinv_[j] * (f * E_[m + j + 1]);
        }
        return -(half * sa) - sb;
    }

    // sigma^{-2 Q^{m+1}} and sigma^{-4 Q^{m+1}} with sigma = e^{2 pi i t}
    cpx<R> sigma2(int m) const { return E_[m + 1]; }
    cpx<R> sigma4(int m) const { return E_[m + 1] * E_[m + 1]; }

    // A_m = (Q-1) U_{1,m} - sigma^{-2 Q^{m+1}}
    cpx<R> A(int m) const { return R(Q_ - 1) * U1m(m) - sigma2(m); }

    // B_m = (Q-1)(D(Q-1)+2) U_{1,m}^2 - 2(D(Q-1)+4Q) sigma^{-2Q^{m+1}} U_{1,m}
    //       - 4(Q-1) U_{2,m} + (D+2) sigma^{-4Q^{m+1}}
    cpx<R> B(int m, R D) const {
        const cpx<R> u1 = U1m(m);
        const cpx<R> u2 = U2m(m);
        const R c1 = R(Q_ - 1) * (D * R(Q_ - 1) + R(2));
        const R c2 = R(2) * (D * R(Q_ - 1) + R(4 * Q_));
        return c1 * (u1 * u1) - c2 * (sigma2(m) * u1) - R(4 * (Q_ - 1)) * u2 +
               (D + R(2)) * sigma4(m);
    }

private:
    int phase_count() const { return max_offset_ + tr_.L + tr_.L2 + 2; }

    void build_weights() {
        const int top = std::max(tr_.L, tr_.L2) + 1;
        qinv_.resize(top + 1);
        qinv_[0] = R(1);
        for (int i = 1; i <= top; ++i) qinv_[i] = qinv_[i - 1] / R(Q_);
    }

    void build_F() const {
        if (!F_.empty()) return;
        const int KF = max_offset_ + tr_.L + 1;
        F_.resize(KF);
        for (int k = 0; k < KF; ++k) {
            cpx<R> f{};
            for (int l = 1; l <= tr_.L2; ++l) f += qinv_[l] * E_[k + l];
            F_[k] = f;
        }
    }

    int Q_;
    TruncatedSeries tr_;
    int max_offset_;
    std::vector<cpx<R>> E_;
    std::vector<R> qinv_;
    mutable std::vector<cpx<R>> F_;
};

// U1(t) = phi(2 Q t)
template <class R>
cpx<R> U1(R t, int Q, const TruncatedSeries& tr) {
    return SeriesCtx<R>(Q, tr, 0, t).U1m(0);
}

template <class R>
cpx<R> U2(R t, int Q, const TruncatedSeries& tr) {
    return SeriesCtx<R>(Q, tr, 0, t).U2m(0);
}

template <class R>
cpx<R> A_term(R t, int m, int Q, const TruncatedSeries& tr) {
    return SeriesCtx<R>(Q, tr, m, t).A(m);
}

template <class R>
cpx<R> B_term(R t, int m, int Q, R D, const TruncatedSeries& tr) {
    return SeriesCtx<R>(Q, tr, m, t).B(m, D);
}

// Second-order boundary parameterization z(t) = e^{2 pi i t} (1 + p U1 + p^2 U2).
inline complexd boundary_series(double t, const McMullenMap& m, const TruncatedSeries& tr) {
    SeriesCtx<double> ctx(m.Q, tr, 0, t);
    const complexd u1 = detail::to_std(ctx.U1m(0));
    const complexd u2 = detail::to_std(ctx.U2m(0));
    const complexd one{1.0, 0.0};
    return std::polar(1.0, 2.0 * 3.141592653589793238462643 * t) *
           (one + m.p * u1 + m.p * m.p * u2);
}

// Closed-form dimension prediction 1 + |p|^2 / log Q.
inline DimensionEstimate predict_dimension(int Q, complexd p) {
    if (Q < 3) throw std::invalid_argument("predict_dimension: Q must be >= 3");
    const double D = 1.0 + std::norm(p) / std::log(static_cast<double>(Q));
    DimensionEstimate e;
    e.D = D;
    e.n = 0;
    e.bracket_lo = e.bracket_hi = D;
    e.residual = 0.0;
    e.method = DimMethod::series_prediction;
    return e;
}

// <G>_n: mean of G over the periodic angles t_j = j / (Q^n - 1).
template <class F>
complexd average(F&& g, int n, int Q) {
    const std::int64_t den = checked_pow_i64(Q, n) - 1;
    kahan_sum<double> re, im;
    for (std::int64_t j = 0; j < den; ++j) {
        const complexd v = g(static_cast<double>(j) / static_cast<double>(den));
        re += v.real();
        im += v.imag();
    }
    return {re.get() / static_cast<double>(den), im.get() / static_cast<double>(den)};
}

// <e^{2 pi i m t}>_n with the phase index reduced exactly mod Q^n - 1.
inline complexd character_average(std::int64_t m, int n, int Q) {
    const std::int64_t den = checked_pow_i64(Q, n) - 1;
    const std::int64_t mr = ((m % den) + den) % den;
    kahan_sum<double> re, im;
    for (std::int64_t j = 0; j < den; ++j) {
        const std::int64_t ix = mod_mul(mr, j, den);
        const double a =
            2.0 * 3.141592653589793238462643 * (static_cast<double>(ix) / static_cast<double>(den));
        re += std::cos(a);
        im += std::sin(a);
    }
    return {re.get() / static_cast<double>(den), im.get() / static_cast<double>(den)};
}

// Exact integer predicates behind the vanishing-average bookkeeping.
// divisibility_2Qv:       (Q^n - 1) | 2 Q^v
// divisibility_2Qv_u:     (Q^n - 1) | 2 Q^v (Q^u + 1)
// divisibility_geometric: (Q^n - 1) | (Q^u - 1), true iff n divides u
inline bool divisibility_2Qv(int v, int n, int Q) {
    const std::int64_t M = checked_pow_i64(Q, n) - 1;
    return mod_mul(2, mod_pow(Q, static_cast<std::uint64_t>(v), M), M) == 0;
}

inline bool divisibility_2Qv_u(int u, int v, int n, int Q) {
    const std::int64_t M = checked_pow_i64(Q, n) - 1;
    const std::int64_t qa = (mod_pow(Q, static_cast<std::uint64_t>(u), M) + 1) % M;
    const std::int64_t t = mod_mul(qa, mod_pow(Q, static_cast<std::uint64_t>(v), M), M);
    return mod_mul(2, t, M) == 0;
}

inline bool divisibility_geometric(int u, int n, int Q) {
    const std::int64_t M = checked_pow_i64(Q, n) - 1;
    return (mod_pow(Q, static_cast<std::uint64_t>(u), M) + M - 1) % M == 0;
}

// sum_{m,k=0}^{n-1} <A_m conj(A_k)>_n by direct enumeration over all Q^n - 1
// angles. Uses A_m(t) = A_0(Q^m t): A_0 is tabulated once per angle and the
// double sum collapses to <|sum_m A_0(Q^m t)|^2>_n.
inline double sum_AmAk(int n, int Q, const TruncatedSeries& tr, int workers = 0) {
    const std::int64_t den = checked_pow_i64(Q, n) - 1;
    const double two_pi = 2.0 * 3.141592653589793238462643;

    std::vector<complexd> a0(static_cast<std::size_t>(den));
    parallel_for_blocks(den, workers, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        const double qinv = 1.0 / Q;
        for (std::int64_t r = lo; r < hi; ++r) {
            // sigma^{-2Q} index and the U1 phase chain 2 Q^i r mod den
            std::int64_t ix = mod_mul(2 * Q, r, den);
            const std::int64_t sigma_ix = ix;
            double w = qinv;
            complexd u1{0.0, 0.0};
            for (int i = 1; i <= tr.L; ++i) {
                const double ang = two_pi * (static_cast<double>(ix) / static_cast<double>(den));
                u1 -= w * complexd{std::cos(ang), -std::sin(ang)};
                ix = mod_mul(Q, ix, den);
                w *= qinv;
            }
            const double sa = two_pi * (static_cast<double>(sigma_ix) / static_cast<double>(den));
            a0[static_cast<std::size_t>(r)] =
                static_cast<double>(Q - 1) * u1 - complexd{std::cos(sa), -std::sin(sa)};
        }
    });

    std::vector<std::int64_t> qm(static_cast<std::size_t>(n));
    qm[0] = 1 % den;
    for (int m = 1; m < n; ++m) qm[static_cast<std::size_t>(m)] = mod_mul(Q, qm[m - 1], den);

    const double total = deterministic_sum(den, workers, [&](std::int64_t j) {
        complexd s{0.0, 0.0};
        for (int m = 0; m < n; ++m) s += a0[static_cast<std::size_t>(mod_mul(qm[m], j, den))];
        return std::norm(s);
    });
    return total / static_cast<double>(den);
}

// Finite forms of the double geometric sums used by the n-linear bookkeeping:
//   sum_{m=0}^{n-1} sum_{k=0}^{m}   Q^{-(m-k)} = nQ/(Q-1) - (Q - Q^{-(n-1)})/(Q-1)^2
//   sum_{m=0}^{n-1} sum_{k=0}^{m-1} Q^{-(m-k)} = n /(Q-1) - (Q - Q^{-(n-1)})/(Q-1)^2
inline double geometric_double_sum(int n, int Q, bool strict) {
    kahan_sum<double> s;
    for (int m = 0; m < n; ++m)
        for (int k = 0; k <= (strict ? m - 1 : m); ++k)
            s += std::pow(static_cast<double>(Q), -(m - k));
    return s.get();
}

inline double geometric_double_sum_closed(int n, int Q, bool strict) {
    const double q = static_cast<double>(Q);
    const double corr = (q - std::pow(q, -(n - 1))) / ((q - 1.0) * (q - 1.0));
    return (strict ? n / (q - 1.0) : n * q / (q - 1.0)) - corr;
}

} // namespace mcdim
