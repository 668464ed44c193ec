#pragma once

#include <cstdint>
#include <stdexcept>

namespace mcdim {

// base^e, throws on int64 overflow.
inline std::int64_t checked_pow_i64(std::int64_t base, int e) {
    if (base <= 0 || e < 0) throw std::invalid_argument("checked_pow_i64: domain");
    __int128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
        if (r > static_cast<__int128>(INT64_MAX))
            throw std::overflow_error("checked_pow_i64: exponent too large for 64-bit range");
    }
    return static_cast<std::int64_t>(r);
}

inline std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

// base^e mod m via square-and-multiply; exact for any e, no big integers needed.
inline std::int64_t mod_pow(std::int64_t base, std::uint64_t e, std::int64_t m) {
    if (m <= 0) throw std::invalid_argument("mod_pow: modulus must be positive");
    std::int64_t r = 1 % m;
    std::int64_t b = base % m;
    if (b < 0) b += m;
    while (e) {
        if (e & 1u) r = mod_mul(r, b, m);
        b = mod_mul(b, b, m);
        e >>= 1u;
    }
    return r;
}

} // namespace mcdim
