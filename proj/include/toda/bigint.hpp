/* Arbitrary-precision integer alias and the handful of number-theory helpers
 * used throughout. Degrees grow like 2p^(p-1), so everything degree-valued
 * is an Int; cohomological filtration degrees stay machine-sized. */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace toda {

using Int = boost::multiprecision::cpp_int;

// Least nonnegative residue, well-defined for negative a. m > 0 required.
inline Int mod_norm(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline bool divides(const Int& m, const Int& a) { return mod_norm(a, m) == 0; }

// Floor division for b > 0 (cpp_int's operator/ truncates toward zero).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int pow_int(const Int& base, unsigned long exp) {
    Int r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

inline bool is_prime(long long v) {
    if (v < 2) return false;
    if (v < 4) return true;
    if (v % 2 == 0) return false;
    for (long long d = 3; d * d <= v; d += 2)
        if (v % d == 0) return false;
    return true;
}

}  // namespace toda
