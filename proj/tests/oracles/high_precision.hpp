#pragma once

// Closed forms evaluated in 50-digit floating point.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

inline Big constant_M(Big C, Big alpha, Big T)
{
    using boost::multiprecision::exp;
    const Big first = (3 * (1 - alpha) / (2 * C + alpha) + 1) * exp((2 * C + alpha) * T / (1 - alpha));
    const Big second = ((1 - alpha) / C + 1) * exp(C * T / (1 - alpha));
    return first > second ? first : second;
}

/// M1 (M K)^{n+1} (T - t)^{n+1} / (n+1)!
inline Big linear_phi(Big M, Big K, Big M1, Big T, Big t, int n)
{
    Big v = M1;
    for (int j = 1; j <= n + 1; ++j) v *= M * K * (T - t) / j;
    return v;
}

} // namespace oracle
