#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace stoprule {

// Exact arbitrary-precision rational. GMP keeps mpq_class canonical
// (reduced, positive denominator) as long as construction goes through
// the helpers below.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Exact: every finite double is a dyadic rational.
inline Rat rat_from_double(double x) { return Rat(x); }

inline double to_double(const Rat& q) { return q.get_d(); }

// "num/den", or just "num" for integers.
inline std::string to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Int binomial_exact(unsigned long n, unsigned long k) {
    if (k > n) return Int(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

} // namespace stoprule
