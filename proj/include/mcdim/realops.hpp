#pragma once

#include <cmath>

#if defined(__SIZEOF_FLOAT128__) && !defined(MCDIM_NO_FLOAT128)
#include <quadmath.h>
#define MCDIM_HAVE_FLOAT128 1
#endif

namespace mcdim {

// Scalar operations for the precisions the series code runs at. Double is the
// production path; __float128 backs the identity suite, where the quantities
// being measured (truncation residuals ~ Q^-40) sit far below double rounding.
template <class R>
struct real_ops;

template <>
struct real_ops<double> {
    static double pi() { return 3.141592653589793238462643383279502884; }
    static double cos(double x) { return std::cos(x); }
    static double sin(double x) { return std::sin(x); }
    static double sqrt(double x) { return std::sqrt(x); }
    static double abs(double x) { return std::fabs(x); }
    static double floor(double x) { return std::floor(x); }
    static double from_ratio(std::int64_t a, std::int64_t b) {
        return static_cast<double>(a) / static_cast<double>(b);
    }
};

template <>
struct real_ops<long double> {
    static long double pi() { return 3.141592653589793238462643383279502884L; }
    static long double cos(long double x) { return std::cos(x); }
    static long double sin(long double x) { return std::sin(x); }
    static long double sqrt(long double x) { return std::sqrt(x); }
    static long double abs(long double x) { return std::fabs(x); }
    static long double floor(long double x) { return std::floor(x); }
    static long double from_ratio(std::int64_t a, std::int64_t b) {
        return static_cast<long double>(a) / static_cast<long double>(b);
    }
};

#ifdef MCDIM_HAVE_FLOAT128
template <>
struct real_ops<__float128> {
    static __float128 pi() {
        static const __float128 v = 2 * asinq(static_cast<__float128>(1));
        return v;
    }
    static __float128 cos(__float128 x) { return cosq(x); }
    static __float128 sin(__float128 x) { return sinq(x); }
    static __float128 sqrt(__float128 x) { return sqrtq(x); }
    static __float128 abs(__float128 x) { return fabsq(x); }
    static __float128 floor(__float128 x) { return floorq(x); }
    static __float128 from_ratio(std::int64_t a, std::int64_t b) {
        return static_cast<__float128>(a) / static_cast<__float128>(b);
    }
};
// Highest precision available for the identity suite.
using verify_real = __float128;
#else
using verify_real = long double;
#endif

// Minimal complex value type usable at all three precisions (std::complex is
// only specified for the standard floating types).
template <class R>
struct cpx {
    R re{};
    R im{};

    friend cpx operator+(cpx a, cpx b) { return {a.re + b.re, a.im + b.im}; }
    friend cpx operator-(cpx a, cpx b) { return {a.re - b.re, a.im - b.im}; }
    friend cpx operator*(cpx a, cpx b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend cpx operator*(R s, cpx a) { return {s * a.re, s * a.im}; }
    friend cpx operator-(cpx a) { return {-a.re, -a.im}; }
    cpx& operator+=(cpx o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    cpx& operator-=(cpx o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
};

template <class R>
R abs2(cpx<R> z) {
    return z.re * z.re + z.im * z.im;
}

template <class R>
R cabs(cpx<R> z) {
    return real_ops<R>::sqrt(abs2(z));
}

template <class R>
cpx<R> conj(cpx<R> z) {
    return {z.re, -z.im};
}

// e^{2 pi i x}
template <class R>
cpx<R> cis2pi(R x) {
    const R a = R(2) * real_ops<R>::pi() * x;
    return {real_ops<R>::cos(a), real_ops<R>::sin(a)};
}

template <class R>
R frac(R x) {
    return x - real_ops<R>::floor(x);
}

} // namespace mcdim
