#pragma once

#include <vector>

#include "ellgw/combinatorics.hpp"
#include "ellgw/stationary.hpp"

namespace ellgw::oracle {

// Oracle: stationary invariants through the Gromov-Witten/Hurwitz
// correspondence. For a genus-one target every partition has Plancherel
// weight (dim lambda / d!)^0 = 1.
inline Rational bernoulli(int n)
{
    std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational acc = 0;
        for (int k = 0; k < m; ++k) {
            acc += Rational(binomial(static_cast<unsigned>(m + 1), static_cast<unsigned>(k))) * b[static_cast<std::size_t>(k)];
        }
        b[static_cast<std::size_t>(m)] = -acc / (m + 1);
    }
    return b[static_cast<std::size_t>(n)];
}

inline Rational zeta_negative(int m)
{
    return -bernoulli(m + 1) / (m + 1);
}

inline Rational rpow(const Rational& x, int e)
{
    Rational r = 1;
    for (int i = 0; i < e; ++i) {
        r *= x;
    }
    return r;
}

// p_k(lambda) = sum_i [(lambda_i - i + 1/2)^{k-1} - (-i + 1/2)^{k-1}] + (1 - 2^{1-k}) zeta(1-k)
inline Rational shifted_power_sum(const Partition& lambda, int k)
{
    Rational r = (1 - 1 / rpow(Rational(2), k - 1)) * zeta_negative(k - 1);
    const Rational half(1, 2);
    for (int i = 1; i <= lambda.length(); ++i) {
        r += rpow(lambda.parts()[static_cast<std::size_t>(i - 1)] - i + half, k - 1) - rpow(-i + half, k - 1);
    }
    return r;
}

inline Rational hurwitz_oracle(const StationaryProfile& profile, int degree)
{
    Rational total = 0;
    for (const auto& lambda : partitions(degree)) {
        Rational term = 1;
        for (int k : profile) {
            term *= shifted_power_sum(lambda, k + 2) / Rational(factorial(static_cast<unsigned>(k + 1)));
        }
        total += term;
    }
    return total;
}

} // namespace ellgw::oracle
