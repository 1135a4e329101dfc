#pragma once

// Sparse multivariate (Laurent) series in z_1..z_n, truncated in total degree.
//
// Exponents may be negative so that the finalized n-point function, which
// lives in (z_1...z_n)^{-1} R[[z]], has a home. `order` is the highest total
// degree whose coefficients are exactly known.

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ellgw/series.hpp"

namespace ellgw {

inline constexpr int kMaxZVariables = 8;

using Exponents = std::array<std::int16_t, kMaxZVariables>;

inline int total_degree(const Exponents& e, int nvars)
{
    int d = 0;
    for (int i = 0; i < nvars; ++i) {
        d += e[static_cast<std::size_t>(i)];
    }
    return d;
}

/// Linear form sum_{i in S} z_i, encoded by the bit set S (bit i <-> z_{i+1}).
using SubsetMask = std::uint32_t;

template <class R>
class MultiSeries {
public:
    using term_map = std::map<Exponents, R>;

    MultiSeries(int nvars, int order, R zero) : nvars_(nvars), order_(order), zero_(std::move(zero))
    {
        if (nvars < 0 || nvars > kMaxZVariables) {
            throw std::invalid_argument("MultiSeries: unsupported number of variables");
        }
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const term_map& terms() const { return terms_; }
    const R& zero() const { return zero_; }
    std::size_t size() const { return terms_.size(); }

    /// Exact coefficient; throws when e has total degree above the order.
    R coefficient(const Exponents& e) const
    {
        if (total_degree(e, nvars_) > order_) {
            throw TruncationError("multivariate coefficient beyond truncation order");
        }
        auto it = terms_.find(e);
        return it == terms_.end() ? zero_ : it->second;
    }

    /// Accumulate c * z^e (dropped when beyond the order).
    void add_term(const Exponents& e, const R& c)
    {
        if (total_degree(e, nvars_) > order_ || ring_traits<R>::is_zero(c)) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second = it->second + c;
            if (ring_traits<R>::is_zero(it->second)) {
                terms_.erase(it);
            }
        }
    }

    void set_order(int order) { order_ = order; }

    friend bool operator==(const MultiSeries& a, const MultiSeries& b)
    {
        return a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

private:
    int nvars_;
    int order_;
    R zero_;
    term_map terms_;
};

template <class R>
MultiSeries<R> operator+(const MultiSeries<R>& a, const MultiSeries<R>& b)
{
    if (a.nvars() != b.nvars()) {
        throw std::invalid_argument("MultiSeries: variable count mismatch");
    }
    MultiSeries<R> r(a.nvars(), std::min(a.order(), b.order()), a.zero());
    for (const auto& [e, c] : a.terms()) {
        r.add_term(e, c);
    }
    for (const auto& [e, c] : b.terms()) {
        r.add_term(e, c);
    }
    return r;
}

template <class R>
MultiSeries<R> scale(const MultiSeries<R>& a, const R& s)
{
    MultiSeries<R> r(a.nvars(), a.order(), a.zero());
    for (const auto& [e, c] : a.terms()) {
        r.add_term(e, c * s);
    }
    return r;
}

/// Truncated product; the result is exact up to min over the two
/// (order + valuation of the other factor) bounds, capped at `cap`.
template <class R>
MultiSeries<R> multiseries_mul(const MultiSeries<R>& a, const MultiSeries<R>& b, int cap)
{
    if (a.nvars() != b.nvars()) {
        throw std::invalid_argument("MultiSeries: variable count mismatch");
    }
    const int n = a.nvars();
    MultiSeries<R> r(n, std::min(cap, std::min(a.order(), b.order())), a.zero());
    for (const auto& [ea, ca] : a.terms()) {
        const int da = total_degree(ea, n);
        for (const auto& [eb, cb] : b.terms()) {
            if (da + total_degree(eb, n) > r.order()) {
                continue;
            }
            Exponents e{};
            for (int i = 0; i < n; ++i) {
                e[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)]);
            }
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

/// Multiply by the linear form sum_{i in S} z_i; the order grows by one.
template <class R>
MultiSeries<R> mul_linear_form(const MultiSeries<R>& a, SubsetMask form)
{
    MultiSeries<R> r(a.nvars(), a.order() + 1, a.zero());
    for (const auto& [e, c] : a.terms()) {
        for (int i = 0; i < a.nvars(); ++i) {
            if (form & (SubsetMask{1} << i)) {
                Exponents f = e;
                ++f[static_cast<std::size_t>(i)];
                r.add_term(f, c);
            }
        }
    }
    return r;
}

/// Exact division of a polynomial by sum_{i in S} z_i. Throws
/// InconsistencyError when a nonzero remainder appears; the division is never
/// allowed to silently drop terms.
template <class R>
MultiSeries<R> exact_divide_linear_form(const MultiSeries<R>& a, SubsetMask form)
{
    if (form == 0) {
        throw std::invalid_argument("empty linear form");
    }
    const int n = a.nvars();
    const int lead = std::countr_zero(form);
    const auto lead_slot = static_cast<std::size_t>(lead);
    // Working copy bucketed by the exponent of the lead variable.
    std::map<int, std::map<Exponents, R>, std::greater<>> buckets;
    for (const auto& [e, c] : a.terms()) {
        if (e[lead_slot] < 0) {
            throw InconsistencyError("exact_divide_linear_form: negative exponent in dividend");
        }
        buckets[e[lead_slot]].emplace(e, c);
    }
    MultiSeries<R> quotient(n, a.order() - 1, a.zero());
    while (!buckets.empty()) {
        auto top = buckets.begin();
        const int p = top->first;
        auto bucket = std::move(top->second);
        buckets.erase(top);
        if (p == 0) {
            for (const auto& [e, c] : bucket) {
                if (!ring_traits<R>::is_zero(c)) {
                    throw InconsistencyError("exact_divide_linear_form: nonzero remainder");
                }
            }
            break;
        }
        for (const auto& [e, c] : bucket) {
            if (ring_traits<R>::is_zero(c)) {
                continue;
            }
            Exponents qe = e;
            --qe[lead_slot];
            quotient.add_term(qe, c);
            // subtract c * qe * (form - z_lead), which lives in bucket p-1
            auto& below = buckets[p - 1];
            for (int i = 0; i < n; ++i) {
                if (i != lead && (form & (SubsetMask{1} << i))) {
                    Exponents f = qe;
                    ++f[static_cast<std::size_t>(i)];
                    auto [it, inserted] = below.try_emplace(f, -c);
                    if (!inserted) {
                        it->second = it->second - c;
                    }
                }
            }
        }
    }
    return quotient;
}

/// Substitute z_i -> z_{perm[i]} (0-based).
template <class R>
MultiSeries<R> permute_variables(const MultiSeries<R>& a, std::span<const int> perm)
{
    MultiSeries<R> r(a.nvars(), a.order(), a.zero());
    for (const auto& [e, c] : a.terms()) {
        Exponents f{};
        for (int i = 0; i < a.nvars(); ++i) {
            f[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = e[static_cast<std::size_t>(i)];
        }
        r.add_term(f, c);
    }
    return r;
}

/// Multiply by z_i^shift for each i (shift may be negative: Laurent division
/// by a monomial is always exact).
template <class R>
MultiSeries<R> shift_exponents(const MultiSeries<R>& a, std::span<const int> shift)
{
    int dtotal = 0;
    for (int i = 0; i < a.nvars(); ++i) {
        dtotal += shift[static_cast<std::size_t>(i)];
    }
    MultiSeries<R> r(a.nvars(), a.order() + dtotal, a.zero());
    for (const auto& [e, c] : a.terms()) {
        Exponents f = e;
        for (int i = 0; i < a.nvars(); ++i) {
            f[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(f[static_cast<std::size_t>(i)] + shift[static_cast<std::size_t>(i)]);
        }
        r.add_term(f, c);
    }
    return r;
}

} // namespace ellgw
