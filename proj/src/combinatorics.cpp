#include "ellgw/combinatorics.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace ellgw {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts))
{
    if (std::any_of(parts_.begin(), parts_.end(), [](int p) { return p <= 0; })) {
        throw std::invalid_argument("partition parts must be positive");
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int Partition::weight() const
{
    return std::accumulate(parts_.begin(), parts_.end(), 0);
}

int Partition::multiplicity(int j) const
{
    return static_cast<int>(std::count(parts_.begin(), parts_.end(), j));
}

std::map<int, int> Partition::multiplicities() const
{
    std::map<int, int> m;
    for (int p : parts_) {
        ++m[p];
    }
    return m;
}

std::vector<Partition> partitions(int d)
{
    if (d < 0) {
        throw std::invalid_argument("partitions of a negative integer");
    }
    std::vector<Partition> out;
    std::vector<int> current;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            current.push_back(p);
            rec(remaining - p, p);
            current.pop_back();
        }
    };
    rec(d, d);
    return out;
}

Integer automorphism_factor(const Partition& lambda)
{
    Integer r = 1;
    for (const auto& [part, m] : lambda.multiplicities()) {
        r *= factorial(static_cast<unsigned>(m));
    }
    return r;
}

std::vector<SetPartition> set_partitions(int n)
{
    if (n < 1) {
        throw std::invalid_argument("set_partitions needs n >= 1");
    }
    std::vector<SetPartition> out;
    std::vector<int> growth(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int nblocks) {
        if (i == n) {
            SetPartition p(static_cast<std::size_t>(nblocks));
            for (int j = 0; j < n; ++j) {
                p[static_cast<std::size_t>(growth[static_cast<std::size_t>(j)])].push_back(j);
            }
            out.push_back(std::move(p));
            return;
        }
        for (int b = 0; b <= nblocks; ++b) {
            growth[static_cast<std::size_t>(i)] = b;
            rec(i + 1, std::max(nblocks, b + 1));
        }
    };
    growth[0] = 0;
    rec(1, 1);
    return out;
}

Rational pochhammer(const Rational& a, int b)
{
    if (b < 0) {
        throw std::invalid_argument("pochhammer with negative length");
    }
    Rational r = 1;
    for (int i = 0; i < b; ++i) {
        r *= a + i;
    }
    return r;
}

Integer divisor_power_sum(std::uint64_t n, unsigned k)
{
    if (n == 0) {
        throw std::invalid_argument("divisor_power_sum needs n >= 1");
    }
    Integer s = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), d, k);
        s += p;
        const std::uint64_t e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(p.get_mpz_t(), e, k);
            s += p;
        }
    }
    return s;
}

} // namespace ellgw
