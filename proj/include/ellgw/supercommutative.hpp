#pragma once

// Truncated supercommutative polynomials in t^alpha_d, alpha = 1..4, where
// t^2_d and t^3_d are odd and t^1_d, t^4_d are even.
//
// Odd variables in a monomial are kept in the canonical order (alpha, d)
// ascending; the Koszul sign of any reordering is folded into the coefficient.
// A polynomial knows all of its terms up to `exact_degree()` total degree and
// represents the restriction t^*_d = 0 for d > max_level().

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ellgw/series.hpp"

namespace ellgw {

inline constexpr int kLevelCapacity = 16;

/// Degree bound used by rings that are not truncated in total degree.
inline constexpr int kUnboundedDegree = 1 << 20;

struct TVariable {
    int alpha = 1;
    int level = 0;

    bool odd() const { return alpha == 2 || alpha == 3; }
    friend bool operator==(const TVariable&, const TVariable&) = default;
    friend auto operator<=>(const TVariable&, const TVariable&) = default;
};

inline TVariable tvar(int alpha, int level)
{
    if (alpha < 1 || alpha > 4 || level < 0 || level >= kLevelCapacity) {
        throw std::invalid_argument("variable t^" + std::to_string(alpha) + "_" + std::to_string(level) + " out of range");
    }
    return TVariable{alpha, level};
}

class SuperMonomial {
public:
    SuperMonomial() = default;

    static SuperMonomial of(TVariable v)
    {
        SuperMonomial m;
        if (v.odd()) {
            m.odd_ = bit(v);
        } else {
            m.even_[even_slot(v)] = 1;
        }
        return m;
    }

    int degree() const
    {
        int d = std::popcount(odd_);
        for (auto e : even_) {
            d += e;
        }
        return d;
    }

    bool is_one() const { return degree() == 0; }
    bool odd_parity() const { return (std::popcount(odd_) & 1) != 0; }
    std::uint32_t odd_mask() const { return odd_; }

    int exponent(TVariable v) const
    {
        return v.odd() ? ((odd_ & bit(v)) != 0 ? 1 : 0) : even_[even_slot(v)];
    }

    /// Highest descendant level present, -1 for the constant monomial.
    int max_level() const
    {
        int lvl = -1;
        for (int a = 0; a < 2; ++a) {
            for (int l = 0; l < kLevelCapacity; ++l) {
                if (even_[static_cast<std::size_t>(a * kLevelCapacity + l)] != 0) {
                    lvl = std::max(lvl, l);
                }
            }
        }
        for (std::uint32_t m = odd_; m != 0; m &= m - 1) {
            lvl = std::max(lvl, std::countr_zero(m) % kLevelCapacity);
        }
        return lvl;
    }

    /// Variables with multiplicity, in canonical (alpha, level) order.
    std::vector<TVariable> factors() const
    {
        std::vector<TVariable> out;
        for (int alpha = 1; alpha <= 4; ++alpha) {
            for (int l = 0; l < kLevelCapacity; ++l) {
                const TVariable v{alpha, l};
                for (int k = exponent(v); k > 0; --k) {
                    out.push_back(v);
                }
            }
        }
        return out;
    }

    bool contains_any(const std::function<bool(TVariable)>& pred) const
    {
        for (const auto& v : factors()) {
            if (pred(v)) {
                return true;
            }
        }
        return false;
    }

    /// Product a*b brought to canonical form. Returns the Koszul sign (+1 or
    /// -1), or 0 when an odd variable repeats.
    friend int multiply(const SuperMonomial& a, const SuperMonomial& b, SuperMonomial& out)
    {
        if ((a.odd_ & b.odd_) != 0) {
            return 0;
        }
        int swaps = 0;
        for (std::uint32_t m = b.odd_; m != 0; m &= m - 1) {
            const int pos = std::countr_zero(m);
            const std::uint32_t above = pos >= 31 ? 0u : (a.odd_ & ~((std::uint32_t{2} << pos) - 1));
            swaps += std::popcount(above);
        }
        out = a;
        out.odd_ |= b.odd_;
        for (std::size_t i = 0; i < out.even_.size(); ++i) {
            out.even_[i] = static_cast<std::uint8_t>(out.even_[i] + b.even_[i]);
        }
        return (swaps & 1) ? -1 : 1;
    }

    /// Left partial derivative of the monomial: returns the integer factor
    /// (exponent for even v, Koszul sign for odd v; 0 when v is absent).
    friend int left_derivative(const SuperMonomial& m, TVariable v, SuperMonomial& out)
    {
        out = m;
        if (v.odd()) {
            const std::uint32_t b = bit(v);
            if ((m.odd_ & b) == 0) {
                return 0;
            }
            out.odd_ &= ~b;
            return (std::popcount(m.odd_ & (b - 1)) & 1) ? -1 : 1;
        }
        const auto slot = even_slot(v);
        const int e = m.even_[slot];
        if (e == 0) {
            return 0;
        }
        out.even_[slot] = static_cast<std::uint8_t>(e - 1);
        return e;
    }

    /// prod_j m_j! over repeated even variables.
    Integer automorphism_count() const
    {
        Integer r = 1;
        for (auto e : even_) {
            r *= factorial(e);
        }
        return r;
    }

    std::string to_string(char symbol = 't') const
    {
        if (is_one()) {
            return "1";
        }
        std::string s;
        for (int alpha = 1; alpha <= 4; ++alpha) {
            for (int l = 0; l < kLevelCapacity; ++l) {
                const int e = exponent(TVariable{alpha, l});
                if (e == 0) {
                    continue;
                }
                if (!s.empty()) {
                    s += '*';
                }
                s += symbol;
                s += std::to_string(alpha) + "_" + std::to_string(l);
                if (e > 1) {
                    s += "^" + std::to_string(e);
                }
            }
        }
        return s;
    }

    friend bool operator==(const SuperMonomial&, const SuperMonomial&) = default;
    friend std::strong_ordering operator<=>(const SuperMonomial& a, const SuperMonomial& b)
    {
        if (auto c = a.degree() <=> b.degree(); c != 0) {
            return c;
        }
        if (auto c = a.even_ <=> b.even_; c != 0) {
            return c;
        }
        return a.odd_ <=> b.odd_;
    }

private:
    static std::uint32_t bit(TVariable v) { return std::uint32_t{1} << ((v.alpha - 2) * kLevelCapacity + v.level); }
    static std::size_t even_slot(TVariable v)
    {
        return static_cast<std::size_t>((v.alpha == 1 ? 0 : 1) * kLevelCapacity + v.level);
    }

    std::array<std::uint8_t, 2 * kLevelCapacity> even_{};
    std::uint32_t odd_ = 0;
};

struct Truncation {
    int max_degree = 5;
    int max_level = 4;
};

template <class R>
class SuperPolynomial {
public:
    using term_map = std::map<SuperMonomial, R>;

    SuperPolynomial(Truncation trunc, R zero) : max_level_(trunc.max_level), exact_degree_(trunc.max_degree), zero_(std::move(zero))
    {
        if (trunc.max_level < 0 || trunc.max_level >= kLevelCapacity) {
            throw std::invalid_argument("descendant bound out of range");
        }
    }

    static SuperPolynomial constant(Truncation trunc, const R& c)
    {
        SuperPolynomial p(trunc, ring_traits<R>::zero_like(c));
        p.add_term(SuperMonomial{}, c);
        return p;
    }

    static SuperPolynomial variable(Truncation trunc, TVariable v, const R& one)
    {
        SuperPolynomial p(trunc, ring_traits<R>::zero_like(one));
        p.add_term(SuperMonomial::of(v), one);
        return p;
    }

    Truncation truncation() const { return {exact_degree_, max_level_}; }
    int exact_degree() const { return exact_degree_; }
    int max_level() const { return max_level_; }
    const R& zero() const { return zero_; }
    const term_map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    R coefficient(const SuperMonomial& m) const
    {
        if (m.degree() > exact_degree_) {
            throw TruncationError("monomial " + m.to_string() + " beyond exact degree " + std::to_string(exact_degree_));
        }
        if (m.max_level() > max_level_) {
            throw TruncationError("monomial " + m.to_string() + " beyond descendant bound");
        }
        auto it = terms_.find(m);
        return it == terms_.end() ? zero_ : it->second;
    }

    /// Lowest degree of a stored term, or exact_degree()+1 if there is none.
    int valuation() const { return terms_.empty() ? exact_degree_ + 1 : terms_.begin()->first.degree(); }

    void add_term(const SuperMonomial& m, const R& c)
    {
        if (m.degree() > exact_degree_ || ring_traits<R>::is_zero(c)) {
            return;
        }
        if (m.max_level() > max_level_) {
            throw std::invalid_argument("monomial " + m.to_string() + " exceeds the descendant bound");
        }
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = it->second + c;
            if (ring_traits<R>::is_zero(it->second)) {
                terms_.erase(it);
            }
        }
    }

    void set_exact_degree(int d)
    {
        exact_degree_ = d;
        std::erase_if(terms_, [d](const auto& kv) { return kv.first.degree() > d; });
    }

    friend bool operator==(const SuperPolynomial& a, const SuperPolynomial& b)
    {
        return a.max_level_ == b.max_level_ && a.exact_degree_ == b.exact_degree_ && a.terms_ == b.terms_;
    }

private:
    int max_level_;
    int exact_degree_;
    R zero_;
    term_map terms_;
};

namespace detail {

template <class R>
void require_same_levels(const SuperPolynomial<R>& a, const SuperPolynomial<R>& b)
{
    if (a.max_level() != b.max_level()) {
        throw std::invalid_argument("superpolynomials with different descendant bounds");
    }
}

} // namespace detail

template <class R>
SuperPolynomial<R> operator+(const SuperPolynomial<R>& a, const SuperPolynomial<R>& b)
{
    detail::require_same_levels(a, b);
    SuperPolynomial<R> r({std::min(a.exact_degree(), b.exact_degree()), a.max_level()}, a.zero());
    for (const auto& [m, c] : a.terms()) {
        r.add_term(m, c);
    }
    for (const auto& [m, c] : b.terms()) {
        r.add_term(m, c);
    }
    return r;
}

template <class R>
SuperPolynomial<R> operator*(const SuperPolynomial<R>& a, const Rational& s)
{
    SuperPolynomial<R> r(a.truncation(), a.zero());
    if (sgn(s) == 0) {
        return r;
    }
    for (const auto& [m, c] : a.terms()) {
        r.add_term(m, scale(c, s));
    }
    return r;
}

/// Multiply by an even ring element (coefficients are central).
template <class R>
SuperPolynomial<R> scale_by(const SuperPolynomial<R>& a, const R& s)
{
    SuperPolynomial<R> r(a.truncation(), a.zero());
    for (const auto& [m, c] : a.terms()) {
        r.add_term(m, c * s);
    }
    return r;
}

template <class R>
SuperPolynomial<R> operator-(const SuperPolynomial<R>& a)
{
    return a * Rational(-1);
}

template <class R>
SuperPolynomial<R> operator-(const SuperPolynomial<R>& a, const SuperPolynomial<R>& b)
{
    return a + (-b);
}

/// Koszul-signed product. Exact up to min(N_a + val(b), N_b + val(a)),
/// never beyond the larger of the two truncations.
template <class R>
SuperPolynomial<R> spoly_mul(const SuperPolynomial<R>& a, const SuperPolynomial<R>& b)
{
    detail::require_same_levels(a, b);
    const long bound = std::min(static_cast<long>(a.exact_degree()) + b.valuation(),
                                static_cast<long>(b.exact_degree()) + a.valuation());
    const int exact = static_cast<int>(std::min<long>({bound, std::max(a.exact_degree(), b.exact_degree()), kUnboundedDegree}));
    SuperPolynomial<R> r({exact, a.max_level()}, a.zero());
    SuperMonomial m;
    for (const auto& [ma, ca] : a.terms()) {
        const int da = ma.degree();
        for (const auto& [mb, cb] : b.terms()) {
            if (da + mb.degree() > exact) {
                // terms are ordered by degree
                break;
            }
            const int sign = multiply(ma, mb, m);
            if (sign == 0) {
                continue;
            }
            if (sign > 0) {
                r.add_term(m, ca * cb);
            } else {
                r.add_term(m, -(ca * cb));
            }
        }
    }
    return r;
}

template <class R>
SuperPolynomial<R> operator*(const SuperPolynomial<R>& a, const SuperPolynomial<R>& b)
{
    return spoly_mul(a, b);
}

/// Left derivative: move v to the front with its Koszul sign, then strike it.
/// The exact degree drops by one.
template <class R>
SuperPolynomial<R> left_partial(const SuperPolynomial<R>& a, TVariable v)
{
    if (v.level > a.max_level()) {
        throw TruncationError("derivative in a variable beyond the descendant bound");
    }
    SuperPolynomial<R> r({a.exact_degree() - 1, a.max_level()}, a.zero());
    SuperMonomial m;
    for (const auto& [ma, ca] : a.terms()) {
        const int f = left_derivative(ma, v, m);
        if (f != 0) {
            r.add_term(m, scale(ca, Rational(f)));
        }
    }
    return r;
}

/// v * a (left multiplication); the exact degree grows by one.
template <class R>
SuperPolynomial<R> mul_variable(TVariable v, const SuperPolynomial<R>& a)
{
    if (v.level > a.max_level()) {
        throw std::invalid_argument("multiplication by a variable beyond the descendant bound");
    }
    SuperPolynomial<R> r({std::min(a.exact_degree() + 1, kUnboundedDegree), a.max_level()}, a.zero());
    const SuperMonomial mv = SuperMonomial::of(v);
    SuperMonomial m;
    for (const auto& [ma, ca] : a.terms()) {
        const int sign = multiply(mv, ma, m);
        if (sign > 0) {
            r.add_term(m, ca);
        } else if (sign < 0) {
            r.add_term(m, -ca);
        }
    }
    return r;
}

/// sum_k a^k / k!; requires a vanishing constant term.
template <class R>
SuperPolynomial<R> spoly_exp(const SuperPolynomial<R>& a)
{
    if (!a.is_zero() && a.terms().begin()->first.is_one()) {
        throw std::domain_error("spoly_exp: constant term must vanish");
    }
    const R one = ring_traits<R>::one_like(a.zero());
    auto result = SuperPolynomial<R>::constant(a.truncation(), one);
    auto power = result;
    for (int k = 1; k <= a.exact_degree() + 1; ++k) {
        power = spoly_mul(power, a) * Rational(1, k);
        if (power.is_zero()) {
            break;
        }
        result = result + power;
    }
    result.set_exact_degree(std::min(result.exact_degree(), a.exact_degree()));
    return result;
}

/// Drop every monomial containing a variable selected by `assigned`
/// (the substitution assigned -> 0).
template <class R>
SuperPolynomial<R> restrict(const SuperPolynomial<R>& a, const std::function<bool(TVariable)>& assigned)
{
    SuperPolynomial<R> r(a.truncation(), a.zero());
    for (const auto& [m, c] : a.terms()) {
        if (!m.contains_any(assigned)) {
            r.add_term(m, c);
        }
    }
    return r;
}

/// Restriction to t^*_d = 0 for d > level.
template <class R>
SuperPolynomial<R> project_levels(const SuperPolynomial<R>& a, int level)
{
    SuperPolynomial<R> r({a.exact_degree(), std::min(level, a.max_level())}, a.zero());
    for (const auto& [m, c] : a.terms()) {
        if (m.max_level() <= level) {
            r.add_term(m, c);
        }
    }
    return r;
}

template <class R>
SuperPolynomial<R> truncate_degree(const SuperPolynomial<R>& a, int degree)
{
    if (degree > a.exact_degree()) {
        throw TruncationError("cannot extend a truncated superpolynomial");
    }
    auto r = a;
    r.set_exact_degree(degree);
    return r;
}

/// Rewrite the coefficients through f (which must send 0 to 0).
template <class Out, class R, class F>
SuperPolynomial<Out> map_coefficients(const SuperPolynomial<R>& a, const Out& zero, F&& f)
{
    SuperPolynomial<Out> r(a.truncation(), zero);
    for (const auto& [m, c] : a.terms()) {
        r.add_term(m, f(c));
    }
    return r;
}

/// Embed rational coefficients as constant q-series.
inline SuperPolynomial<QSeries> lift_to_qseries(const SuperPolynomial<Rational>& a, int q_order)
{
    const QSeries zero("q", q_order, Rational(0));
    return map_coefficients(a, zero, [&](const Rational& c) { return QSeries::constant("q", q_order, c); });
}

/// Ring homomorphism defined on variables: each t^alpha_d is replaced by
/// image(t^alpha_d), whose parity must match. Coefficients pass through
/// `coeff`, which yields an element of the target ring.
template <class Out, class R, class Image, class Coeff>
Out substitute_variables(const SuperPolynomial<R>& a, Image&& image, Coeff&& coeff)
{
    std::map<TVariable, Out> cache;
    auto image_of = [&](TVariable v) -> const Out& {
        auto it = cache.find(v);
        if (it == cache.end()) {
            it = cache.emplace(v, image(v)).first;
        }
        return it->second;
    };
    Out total = coeff(a.zero());
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        Out term = coeff(c);
        for (const auto& v : m.factors()) {
            term = term * image_of(v);
        }
        total = first ? term : total + term;
        first = false;
    }
    return total;
}

} // namespace ellgw
