#include "ellgw/stationary.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <iostream>
#include <numeric>

#include "ellgw/combinatorics.hpp"
#include "ellgw/quasimodular.hpp"

namespace ellgw {

namespace {

QSeries qzero(int q_order)
{
    return QSeries("q", q_order, Rational(0));
}

MultiSeries<QSeries> truncate_q(const MultiSeries<QSeries>& a, int q_order)
{
    MultiSeries<QSeries> r(a.nvars(), a.order(), qzero(q_order));
    for (const auto& [e, c] : a.terms()) {
        r.add_term(e, c.truncate(q_order));
    }
    return r;
}

int inversion_count(const std::vector<int>& p)
{
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            inv += p[i] > p[j] ? 1 : 0;
        }
    }
    return inv;
}

// Exponent vectors with n entries summing to total.
void for_each_composition(int n, int total, const std::function<void(const Exponents&)>& f)
{
    Exponents e{};
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == n - 1) {
            e[static_cast<std::size_t>(slot)] = static_cast<std::int16_t>(remaining);
            f(e);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            e[static_cast<std::size_t>(slot)] = static_cast<std::int16_t>(v);
            rec(slot + 1, remaining - v);
        }
    };
    if (n == 0) {
        if (total == 0) {
            f(e);
        }
        return;
    }
    rec(0, total);
}

// Rewrite a polynomial in y_1..y_n (y_k = z_1 + ... + z_k) as a polynomial in
// z_1..z_n by substituting y_k = y_{k-1} + z_k from the top down.
MultiSeries<QSeries> partial_sums_to_z(const MultiSeries<QSeries>& h)
{
    const int n = h.nvars();
    MultiSeries<QSeries> cur = h;
    for (int k = n - 1; k >= 1; --k) {
        const auto hi = static_cast<std::size_t>(k);
        const auto lo = static_cast<std::size_t>(k - 1);
        MultiSeries<QSeries> next(n, cur.order(), cur.zero());
        for (const auto& [e, c] : cur.terms()) {
            const int p = e[hi];
            for (int i = 0; i <= p; ++i) {
                Exponents f = e;
                f[lo] = static_cast<std::int16_t>(e[lo] + i);
                f[hi] = static_cast<std::int16_t>(p - i);
                next.add_term(f, c * Rational(binomial(static_cast<unsigned>(p), static_cast<unsigned>(i))));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace

QSeries theta_coefficient(int m, int q_order)
{
    QSeries r = qzero(q_order);
    if (m < 0 || m % 2 == 0) {
        return r;
    }
    // (e^{a z} - e^{-a z}) contributes 2 a^m / m! at z^m; with a = (2n+1)/2
    // that is (2n+1)^m / (2^{m-1} m!).
    const Rational denom = Rational(Integer(1) << static_cast<unsigned>(m - 1)) * Rational(factorial(static_cast<unsigned>(m)));
    std::vector<Rational> c(static_cast<std::size_t>(q_order) + 1, Rational(0));
    for (int n = 0; n * (n + 1) / 2 <= q_order; ++n) {
        Integer odd;
        mpz_ui_pow_ui(odd.get_mpz_t(), static_cast<unsigned long>(2 * n + 1), static_cast<unsigned long>(m));
        Rational term = Rational(odd) / denom;
        if (n % 2 == 1) {
            term = -term;
        }
        c[static_cast<std::size_t>(n * (n + 1) / 2)] += term;
    }
    return QSeries("q", std::move(c));
}

ThetaExpansion theta_expansion(int z_order, int q_order)
{
    std::vector<QSeries> t, u;
    for (int m = 0; m <= z_order; ++m) {
        t.push_back(theta_coefficient(m, q_order));
        u.push_back(theta_coefficient(m + 1, q_order));
    }
    return ThetaExpansion{Series<QSeries>("z", std::move(t)), Series<QSeries>("z", std::move(u))};
}

Series<QSeries> theta_derivative(int k, int z_order, int q_order)
{
    if (k < 0) {
        throw std::invalid_argument("negative derivative order");
    }
    std::vector<QSeries> c;
    for (int p = 0; p <= z_order; ++p) {
        // d^k/dz^k z^{p+k} = (p+k)!/p! z^p
        const Rational f(factorial(static_cast<unsigned>(p + k)) / factorial(static_cast<unsigned>(p)));
        c.push_back(theta_coefficient(p + k, q_order) * f);
    }
    return Series<QSeries>("z", std::move(c));
}

void validate_profile(const StationaryProfile& profile)
{
    for (int d : profile) {
        if (d != -2 && d < 0) {
            throw std::invalid_argument("profile entries must be -2 or non-negative, got " + std::to_string(d));
        }
    }
    if (static_cast<int>(profile.size()) > kMaxZVariables) {
        throw std::invalid_argument("profile too long");
    }
}

// ---------------------------------------------------------------------------
// ZFraction

ZFraction::ZFraction(MultiSeries<QSeries> numerator, std::map<SubsetMask, int> denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator))
{
    const SubsetMask full = (SubsetMask{1} << numerator_.nvars()) - 1;
    for (const auto& [form, mult] : denominator_) {
        if (form == 0 || (form & ~full) != 0 || mult < 0) {
            throw std::invalid_argument("ZFraction: invalid denominator form");
        }
    }
    std::erase_if(denominator_, [](const auto& kv) { return kv.second == 0; });
}

ZFraction ZFraction::with_denominator(const std::map<SubsetMask, int>& target) const
{
    MultiSeries<QSeries> num = numerator_;
    for (const auto& [form, mult] : target) {
        auto it = denominator_.find(form);
        const int have = it == denominator_.end() ? 0 : it->second;
        if (have > mult) {
            throw std::invalid_argument("ZFraction: target denominator does not contain the current one");
        }
        for (int i = have; i < mult; ++i) {
            num = mul_linear_form(num, form);
        }
    }
    for (const auto& [form, mult] : denominator_) {
        if (!target.contains(form)) {
            throw std::invalid_argument("ZFraction: target denominator does not contain the current one");
        }
    }
    return ZFraction(std::move(num), target);
}

ZFraction ZFraction::permuted(std::span<const int> perm) const
{
    std::map<SubsetMask, int> den;
    for (const auto& [form, mult] : denominator_) {
        SubsetMask f = 0;
        for (int i = 0; i < nvars(); ++i) {
            if (form & (SubsetMask{1} << i)) {
                f |= SubsetMask{1} << perm[static_cast<std::size_t>(i)];
            }
        }
        den[f] += mult;
    }
    return ZFraction(permute_variables(numerator_, perm), std::move(den));
}

ZFraction operator+(const ZFraction& a, const ZFraction& b)
{
    std::map<SubsetMask, int> lcd = a.denominator_;
    for (const auto& [form, mult] : b.denominator_) {
        lcd[form] = std::max(lcd[form], mult);
    }
    const auto x = a.with_denominator(lcd);
    const auto y = b.with_denominator(lcd);
    return ZFraction(x.numerator_ + y.numerator_, lcd);
}

MultiSeries<QSeries> ZFraction::finalize() const
{
    MultiSeries<QSeries> num = numerator_;
    std::vector<int> shift(static_cast<std::size_t>(nvars()), 0);
    for (const auto& [form, mult] : denominator_) {
        if (std::popcount(form) == 1) {
            shift[static_cast<std::size_t>(std::countr_zero(form))] -= mult;
            continue;
        }
        for (int i = 0; i < mult; ++i) {
            num = exact_divide_linear_form(num, form);
        }
    }
    return shift_exponents(num, shift);
}

// ---------------------------------------------------------------------------
// StationaryEngine

StationaryEngine::StationaryEngine(int max_points) : max_points_(max_points)
{
    if (max_points < 0 || max_points > kMaxZVariables) {
        throw std::invalid_argument("unsupported number of points");
    }
}

void StationaryEngine::check_points(int n)
{
    if (n > max_points_) {
        throw std::invalid_argument("n-point function with n = " + std::to_string(n) + " exceeds the configured maximum "
                                    + std::to_string(max_points_));
    }
    if (n >= 4 && !warned_) {
        warned_ = true;
        std::cerr << "ellgw: warning: computing a " << n << "-point function; this is expensive\n";
    }
}

MultiSeries<QSeries> StationaryEngine::compute_component(int n, int degree, int q_order) const
{
    const QSeries zero = qzero(q_order);
    const QSeries inv_euler = series_invert(euler_function(q_order));
    if (n == 0) {
        MultiSeries<QSeries> r(0, degree, zero);
        if (degree == 0) {
            r.add_term(Exponents{}, inv_euler);
        }
        return r;
    }
    // H(y) = y_1...y_n * det[...] / prod theta(y_k) is homogeneous of degree
    // `top` in the component we need.
    const int top = degree + n;
    MultiSeries<QSeries> result(n, degree, zero);
    if (top < 0) {
        return result;
    }

    const auto theta = theta_expansion(top + n + 1, q_order);
    const auto unit_inv = series_invert(theta.unit.truncate(top));
    // h[s](y) = theta^{(s)}(y)/s! / unit(y)
    std::vector<Series<QSeries>> h;
    for (int s = 0; s <= n; ++s) {
        std::vector<QSeries> c;
        for (int p = 0; p <= top; ++p) {
            c.push_back(theta.theta[p + s] * Rational(binomial(static_cast<unsigned>(p + s), static_cast<unsigned>(s))));
        }
        h.push_back(series_mul(Series<QSeries>("z", std::move(c)), unit_inv));
    }

    // Hessenberg structure: column j (1-based) of the matrix holds
    // theta^{(j-i+1)}(y_{n-j}) / (j-i+1)!, which vanishes unless i <= j+1.
    struct Expansion {
        int sign;
        QSeries constant;    // entry of column n, evaluated at y_0 = 0
        std::vector<int> s;  // s[k-1] = derivative order carried by y_k, k < n
    };
    std::vector<Expansion> expansions;
    std::vector<int> pi(static_cast<std::size_t>(n));
    std::iota(pi.begin(), pi.end(), 1);
    do {
        bool ok = true;
        for (int j = 1; j <= n; ++j) {
            ok = ok && pi[static_cast<std::size_t>(j - 1)] <= j + 1;
        }
        if (!ok) {
            continue;
        }
        Expansion ex{inversion_count(pi) % 2 == 0 ? 1 : -1, theta.theta[n - pi[static_cast<std::size_t>(n - 1)] + 1], {}};
        if (ex.constant.is_zero()) {
            continue;
        }
        for (int k = 1; k < n; ++k) {
            const int j = n - k;
            ex.s.push_back(j - pi[static_cast<std::size_t>(j - 1)] + 1);
        }
        expansions.push_back(std::move(ex));
    } while (std::next_permutation(pi.begin(), pi.end()));

    MultiSeries<QSeries> hy(n, top, zero);
    for_each_composition(n, top, [&](const Exponents& a) {
        QSeries acc = zero;
        for (const auto& ex : expansions) {
            QSeries term = ex.constant * unit_inv[a[static_cast<std::size_t>(n - 1)]];
            for (int k = 1; k < n && !term.is_zero(); ++k) {
                term = term * h[static_cast<std::size_t>(ex.s[static_cast<std::size_t>(k - 1)])][a[static_cast<std::size_t>(k - 1)]];
            }
            acc = ex.sign > 0 ? acc + term : acc - term;
        }
        hy.add_term(a, acc);
    });

    // Identity-permutation term: K(z) / (w_1 ... w_n) with w_k = z_1 + ... + z_k.
    std::map<SubsetMask, int> chain;
    std::map<SubsetMask, int> lcd;
    for (int k = 1; k <= n; ++k) {
        chain[(SubsetMask{1} << k) - 1] = 1;
    }
    for (SubsetMask s = 1; s < (SubsetMask{1} << n); ++s) {
        lcd[s] = 1;
    }
    const ZFraction identity_term = ZFraction(partial_sums_to_z(hy), chain).with_denominator(lcd);

    // Every permuted term shares the symmetric denominator `lcd`.
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    MultiSeries<QSeries> numerator(n, identity_term.numerator().order(), zero);
    do {
        numerator = numerator + identity_term.permuted(sigma).numerator();
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    const auto laurent = ZFraction(std::move(numerator), lcd).finalize();
    for (const auto& [e, c] : laurent.terms()) {
        result.add_term(e, c * inv_euler);
    }
    return result;
}

MultiSeries<QSeries> StationaryEngine::npoint_component(int n, int degree, int q_order)
{
    std::lock_guard lock(mutex_);
    check_points(n);
    const auto key = std::make_pair(n, degree);
    if (auto it = components_.find(key); it != components_.end() && it->second.zero().order() >= q_order) {
        return it->second.zero().order() == q_order ? it->second : truncate_q(it->second, q_order);
    }
    auto comp = compute_component(n, degree, q_order);
    components_.insert_or_assign(key, comp);
    return comp;
}

MultiSeries<QSeries> StationaryEngine::npoint_function(int n, int z_order, int q_order)
{
    MultiSeries<QSeries> r(n, z_order, qzero(q_order));
    for (int t = -n; t <= z_order; ++t) {
        for (const auto& [e, c] : npoint_component(n, t, q_order).terms()) {
            r.add_term(e, c);
        }
    }
    return r;
}

QSeries StationaryEngine::disconnected_series(const StationaryProfile& profile, int q_order)
{
    validate_profile(profile);
    const int n = static_cast<int>(profile.size());
    Exponents e{};
    int degree = 0;
    for (int i = 0; i < n; ++i) {
        e[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(profile[static_cast<std::size_t>(i)] + 1);
        degree += profile[static_cast<std::size_t>(i)] + 1;
    }
    return npoint_component(n, degree, q_order).coefficient(e);
}

Rational StationaryEngine::disconnected_invariant(const StationaryProfile& profile, int degree)
{
    if (degree < 0) {
        return Rational(0);
    }
    return disconnected_series(profile, degree).coefficient(degree);
}

QSeries StationaryEngine::connected_series(const StationaryProfile& profile, int q_order)
{
    validate_profile(profile);
    StationaryProfile key = profile;
    std::sort(key.begin(), key.end());
    std::lock_guard lock(mutex_);
    if (auto it = connected_.find(key); it != connected_.end() && it->second.order() >= q_order) {
        return it->second.truncate(q_order);
    }
    QSeries result = qzero(q_order);
    if (key.empty()) {
        result = series_log(disconnected_series(key, q_order));
    } else {
        result = euler_function(q_order) * disconnected_series(key, q_order);
        for (const auto& sp : set_partitions(static_cast<int>(key.size()))) {
            if (sp.size() < 2) {
                continue;
            }
            QSeries prod = QSeries::constant("q", q_order, Rational(1));
            for (const auto& block : sp) {
                StationaryProfile sub;
                for (int i : block) {
                    sub.push_back(key[static_cast<std::size_t>(i)]);
                }
                prod = prod * connected_series(sub, q_order);
            }
            result = result - prod;
        }
    }
    connected_.insert_or_assign(key, result);
    return result;
}

QSeries StationaryEngine::stationary_series(const StationaryProfile& profile, int q_order, bool cross_validate)
{
    int weight = 0;
    for (int d : profile) {
        if (d < 0) {
            throw std::invalid_argument("stationary_series needs non-negative descendant levels");
        }
        weight += d + 2;
    }
    QSeries c = connected_series(profile, q_order);
    if (cross_validate && weight % 2 != 0) {
        if (!c.is_zero()) {
            throw InconsistencyError("odd-weight stationary series is nonzero");
        }
    } else if (cross_validate && !profile.empty()) {
        const auto dec = quasimodular_decompose(c, weight, q_order);
        if (!(expand(dec.form, q_order) == c)) {
            throw InconsistencyError("quasimodular cross-validation failed");
        }
    }
    return c;
}

} // namespace ellgw
