#pragma once

// Univariate truncated power series over an arbitrary coefficient ring.
//
// A Series<R> of order N stores the exact coefficients of x^0 .. x^N; nothing
// is known about higher powers. Binary operations truncate at the smaller of
// the two orders.

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>
#include <vector>

#include "ellgw/rational.hpp"

namespace ellgw {

template <class R>
struct ring_traits;

template <>
struct ring_traits<Rational> {
    static Rational zero_like(const Rational&) { return Rational(0); }
    static Rational one_like(const Rational&) { return Rational(1); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static bool is_unit(const Rational& x) { return sgn(x) != 0; }
    static Rational inverse(const Rational& x) { return Rational(1) / x; }
};

template <class R>
class Series {
public:
    using coefficient_type = R;

    /// Zero series of the given order; `zero` fixes the coefficient ring
    /// (for nested series it carries the inner truncation).
    Series(std::string variable, int order, const R& zero)
        : variable_(std::move(variable)), coeffs_(static_cast<std::size_t>(check_order(order)) + 1, zero)
    {
    }

    Series(std::string variable, std::vector<R> coeffs)
        : variable_(std::move(variable)), coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw std::invalid_argument("series needs at least the constant coefficient");
        }
    }

    static Series constant(std::string variable, int order, const R& value)
    {
        Series s(std::move(variable), order, ring_traits<R>::zero_like(value));
        s.coeffs_[0] = value;
        return s;
    }

    /// c * x^k, truncated.
    static Series monomial(std::string variable, int order, int k, const R& c)
    {
        Series s(std::move(variable), order, ring_traits<R>::zero_like(c));
        if (k >= 0 && k <= order) {
            s.coeffs_[static_cast<std::size_t>(k)] = c;
        }
        return s;
    }

    const std::string& variable() const { return variable_; }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }

    /// Coefficient of x^i. Negative i is an honest zero; i beyond the order
    /// is unknown and throws.
    R coefficient(int i) const
    {
        if (i > order()) {
            throw TruncationError("coefficient " + std::to_string(i) + " of " + variable_
                                  + "-series beyond truncation order " + std::to_string(order()));
        }
        if (i < 0) {
            return zero();
        }
        return coeffs_[static_cast<std::size_t>(i)];
    }

    const R& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    const std::vector<R>& coefficients() const { return coeffs_; }

    R zero() const { return ring_traits<R>::zero_like(coeffs_[0]); }
    R one() const { return ring_traits<R>::one_like(coeffs_[0]); }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const R& c) { return ring_traits<R>::is_zero(c); });
    }

    /// Lowest index with a nonzero coefficient, or order()+1 when none is known.
    int valuation() const
    {
        for (int i = 0; i <= order(); ++i) {
            if (!ring_traits<R>::is_zero(coeffs_[static_cast<std::size_t>(i)])) {
                return i;
            }
        }
        return order() + 1;
    }

    Series truncate(int order) const
    {
        if (order > this->order()) {
            throw TruncationError("cannot extend a truncated series");
        }
        return Series(variable_, std::vector<R>(coeffs_.begin(), coeffs_.begin() + order + 1));
    }

    friend bool operator==(const Series& a, const Series& b)
    {
        return a.variable_ == b.variable_ && a.coeffs_ == b.coeffs_;
    }

private:
    static int check_order(int order)
    {
        if (order < 0) {
            throw std::invalid_argument("negative truncation order");
        }
        return order;
    }

    std::string variable_;
    std::vector<R> coeffs_;
};

using QSeries = Series<Rational>;

template <class R>
struct ring_traits<Series<R>> {
    static Series<R> zero_like(const Series<R>& x) { return Series<R>(x.variable(), x.order(), x.zero()); }
    static Series<R> one_like(const Series<R>& x) { return Series<R>::constant(x.variable(), x.order(), x.one()); }
    static bool is_zero(const Series<R>& x) { return x.is_zero(); }
    static bool is_unit(const Series<R>& x) { return ring_traits<R>::is_unit(x[0]); }
    static Series<R> inverse(const Series<R>& x);
};

namespace detail {

template <class R>
void require_same_variable(const Series<R>& a, const Series<R>& b)
{
    if (a.variable() != b.variable()) {
        throw std::invalid_argument("series in different variables: " + a.variable() + " vs " + b.variable());
    }
}

} // namespace detail

/// Multiply every coefficient by a rational scalar.
inline Rational scale(const Rational& x, const Rational& s)
{
    return x * s;
}

template <class R>
Series<R> scale(const Series<R>& a, const Rational& s)
{
    std::vector<R> c;
    c.reserve(a.coefficients().size());
    for (const auto& x : a.coefficients()) {
        c.push_back(scale(x, s));
    }
    return Series<R>(a.variable(), std::move(c));
}

template <class R>
Series<R> operator+(const Series<R>& a, const Series<R>& b)
{
    detail::require_same_variable(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<R> c;
    c.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        c.push_back(a[i] + b[i]);
    }
    return Series<R>(a.variable(), std::move(c));
}

template <class R>
Series<R> operator-(const Series<R>& a)
{
    return scale(a, Rational(-1));
}

template <class R>
Series<R> operator-(const Series<R>& a, const Series<R>& b)
{
    detail::require_same_variable(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<R> c;
    c.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        c.push_back(a[i] - b[i]);
    }
    return Series<R>(a.variable(), std::move(c));
}

template <class R>
Series<R> series_mul(const Series<R>& a, const Series<R>& b)
{
    detail::require_same_variable(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<R> c(static_cast<std::size_t>(n) + 1, a.zero());
    for (int i = 0; i <= n; ++i) {
        if (ring_traits<R>::is_zero(a[i])) {
            continue;
        }
        for (int j = 0; i + j <= n; ++j) {
            if (ring_traits<R>::is_zero(b[j])) {
                continue;
            }
            c[static_cast<std::size_t>(i + j)] = c[static_cast<std::size_t>(i + j)] + a[i] * b[j];
        }
    }
    return Series<R>(a.variable(), std::move(c));
}

template <class R>
Series<R> operator*(const Series<R>& a, const Series<R>& b)
{
    return series_mul(a, b);
}

template <class R>
Series<R> operator*(const Series<R>& a, const Rational& s)
{
    return scale(a, s);
}

/// Multiplicative inverse; requires a unit constant term.
template <class R>
Series<R> series_invert(const Series<R>& a)
{
    if (!ring_traits<R>::is_unit(a[0])) {
        throw std::domain_error("series_invert: constant term is not a unit");
    }
    const int n = a.order();
    const R inv0 = ring_traits<R>::inverse(a[0]);
    std::vector<R> b(static_cast<std::size_t>(n) + 1, a.zero());
    b[0] = inv0;
    for (int k = 1; k <= n; ++k) {
        R acc = a.zero();
        for (int i = 1; i <= k; ++i) {
            if (!ring_traits<R>::is_zero(a[i])) {
                acc = acc + a[i] * b[static_cast<std::size_t>(k - i)];
            }
        }
        b[static_cast<std::size_t>(k)] = -(acc * inv0);
    }
    return Series<R>(a.variable(), std::move(b));
}

template <class R>
Series<R> ring_traits<Series<R>>::inverse(const Series<R>& x)
{
    return series_invert(x);
}

/// exp(a) for a with zero constant term, via b' = a' b.
template <class R>
Series<R> series_exp(const Series<R>& a)
{
    if (!ring_traits<R>::is_zero(a[0])) {
        throw std::domain_error("series_exp: constant term must vanish");
    }
    const int n = a.order();
    std::vector<R> b(static_cast<std::size_t>(n) + 1, a.zero());
    b[0] = a.one();
    for (int k = 1; k <= n; ++k) {
        R acc = a.zero();
        for (int i = 1; i <= k; ++i) {
            if (!ring_traits<R>::is_zero(a[i])) {
                acc = acc + scale(a[i], Rational(i)) * b[static_cast<std::size_t>(k - i)];
            }
        }
        b[static_cast<std::size_t>(k)] = scale(acc, Rational(1, k));
    }
    return Series<R>(a.variable(), std::move(b));
}

enum class DerivativeMode { d_dx, x_d_dx };

template <class R>
Series<R> series_derivative(const Series<R>& a, DerivativeMode mode)
{
    std::vector<R> c;
    if (mode == DerivativeMode::x_d_dx) {
        for (int i = 0; i <= a.order(); ++i) {
            c.push_back(scale(a[i], Rational(i)));
        }
    } else {
        if (a.order() == 0) {
            throw TruncationError("d/dx of an order-0 series has no known coefficients");
        }
        for (int i = 1; i <= a.order(); ++i) {
            c.push_back(scale(a[i], Rational(i)));
        }
    }
    return Series<R>(a.variable(), std::move(c));
}

/// log(a) for a with constant term 1, as the integral of a'/a.
template <class R>
Series<R> series_log(const Series<R>& a)
{
    if (!ring_traits<R>::is_zero(a[0] - a.one())) {
        throw std::domain_error("series_log: constant term must be 1");
    }
    const int n = a.order();
    if (n == 0) {
        return Series<R>(a.variable(), n, a.zero());
    }
    const auto q = series_mul(series_derivative(a, DerivativeMode::d_dx), series_invert(a.truncate(n - 1)));
    std::vector<R> c(static_cast<std::size_t>(n) + 1, a.zero());
    for (int i = 1; i <= n; ++i) {
        c[static_cast<std::size_t>(i)] = scale(q[i - 1], Rational(1, i));
    }
    return Series<R>(a.variable(), std::move(c));
}

/// sum_d a_d g^d by Horner's rule. The caller guarantees that g raises a
/// grading so that the truncation of ring G makes the sum finite.
template <class G>
G series_substitute(const QSeries& a, const G& g, const G& one)
{
    G acc = one * a[a.order()];
    for (int d = a.order() - 1; d >= 0; --d) {
        acc = acc * g + one * a[d];
    }
    return acc;
}

/// The series prod_{j>=1} (1 - q^j) to the given order.
inline QSeries euler_function(int order)
{
    QSeries r = QSeries::constant("q", order, Rational(1));
    for (int j = 1; j <= order; ++j) {
        r = r - QSeries::monomial("q", order, j, Rational(1)) * r;
    }
    return r;
}

} // namespace ellgw
