#pragma once

#include <type_traits>

#include "stoprule/rational.hpp"

namespace stoprule::detail {

// Shared scalar adapter: the same formulas run with exact rationals (small n)
// and with doubles (large n).

template <class T>
T ratio(long long num, long long den) {
    if constexpr (std::is_same_v<T, Rat>) {
        return rat(static_cast<long>(num), static_cast<long>(den));
    } else {
        return static_cast<double>(num) / static_cast<double>(den);
    }
}

template <class T>
T from_real(double x) {
    if constexpr (std::is_same_v<T, Rat>) {
        return rat_from_double(x);
    } else {
        return x;
    }
}

// Plain accumulation for rationals, Kahan compensation for doubles.
template <class T>
struct Acc {
    T sum{};
    void add(const T& x) { sum += x; }
    const T& total() const { return sum; }
};

template <>
struct Acc<double> {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double total() const { return sum; }
};

} // namespace stoprule::detail
