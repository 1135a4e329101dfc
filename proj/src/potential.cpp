#include "ellgw/potential.hpp"

#include <functional>

#include "ellgw/combinatorics.hpp"

namespace ellgw {

namespace {

// Non-increasing sequences of `count` levels in [0, max_level] with the given sum.
void for_each_level_multiset(int count, int sum, int max_level, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> seq;
    std::function<void(int, int, int)> rec = [&](int left, int remaining, int cap) {
        if (left == 0) {
            if (remaining == 0) {
                f(seq);
            }
            return;
        }
        for (int v = std::min(cap, remaining); v >= 0; --v) {
            if (v * left < remaining) {
                break;
            }
            seq.push_back(v);
            rec(left - 1, remaining - v, v);
            seq.pop_back();
        }
    };
    if (sum >= 0) {
        rec(count, sum, max_level);
    }
}

// Monomial of the product of `vars` in the given order, with its Koszul sign
// relative to the canonical order (0 if an odd variable repeats).
int build_monomial(std::span<const TVariable> vars, SuperMonomial& out)
{
    SuperMonomial m;
    int sign = 1;
    for (const auto& v : vars) {
        SuperMonomial next;
        const int s = multiply(m, SuperMonomial::of(v), next);
        if (s == 0) {
            return 0;
        }
        sign *= s;
        m = next;
    }
    out = m;
    return sign;
}

QSeries qconst(int q_order, const Rational& c)
{
    return QSeries::constant("q", q_order, c);
}

SuperPolynomial<Rational> partial_t1_power(SuperPolynomial<Rational> p, int times)
{
    for (int i = 0; i < times; ++i) {
        p = left_partial(p, tvar(1, 0));
    }
    return p;
}

void check_dimension(const DescendantPolynomial& p, int genus)
{
    for (const auto& [m, c] : p.terms()) {
        if (dimension_weight(m) != 4 * genus - 4) {
            throw InconsistencyError("monomial " + m.to_string() + " of F_" + std::to_string(genus)
                                     + " violates the dimension constraint");
        }
    }
}

} // namespace

const std::array<CohomologyClass, 4>& cohomology_basis()
{
    static const std::array<CohomologyClass, 4> basis = {{
        {1, false, 0, 0},
        {2, true, 1, 1},
        {3, true, 1, 0},
        {4, false, 2, 1},
    }};
    return basis;
}

const CohomologyClass& cohomology_class(int alpha)
{
    if (alpha < 1 || alpha > 4) {
        throw std::invalid_argument("cohomology index out of range");
    }
    return cohomology_basis()[static_cast<std::size_t>(alpha - 1)];
}

int EtaMatrix::pairing(int a, int b)
{
    static constexpr int eta[4][4] = {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}};
    cohomology_class(a);
    cohomology_class(b);
    return eta[a - 1][b - 1];
}

int EtaMatrix::inverse(int a, int b)
{
    static constexpr int inv[4][4] = {{0, 0, 0, 1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}};
    cohomology_class(a);
    cohomology_class(b);
    return inv[a - 1][b - 1];
}

int dimension_weight(const SuperMonomial& m)
{
    int w = 0;
    for (const auto& v : m.factors()) {
        w += 2 * v.level + cohomology_class(v.alpha).twice_half_degree - 2;
    }
    return w;
}

SuperPolynomial<Rational> genus0_terms(int max_degree, int max_level)
{
    SuperPolynomial<Rational> f0({max_degree, max_level}, Rational(0));
    auto add = [&](std::vector<TVariable> vars, int n, const std::vector<int>& levels) {
        SuperMonomial m;
        const int sign = build_monomial(vars, m);
        if (sign == 0) {
            return;
        }
        Integer denom = m.automorphism_count();
        for (int k : levels) {
            denom *= factorial(static_cast<unsigned>(k));
        }
        f0.add_term(m, Rational(factorial(static_cast<unsigned>(n - 3))) / Rational(denom) * sign);
    };
    for (int n = 3; n <= max_degree; ++n) {
        const int total = n - 3;
        // tau_{k1}(gamma_4) prod tau(gamma_1)
        for (int k1 = 0; k1 <= std::min(total, max_level); ++k1) {
            for_each_level_multiset(n - 1, total - k1, max_level, [&](const std::vector<int>& rest) {
                std::vector<TVariable> vars{tvar(4, k1)};
                std::vector<int> levels{k1};
                for (int k : rest) {
                    vars.push_back(tvar(1, k));
                    levels.push_back(k);
                }
                add(std::move(vars), n, levels);
            });
        }
        // tau_{k1}(gamma_2) tau_{k2}(gamma_3) prod tau(gamma_1)
        for (int k1 = 0; k1 <= std::min(total, max_level); ++k1) {
            for (int k2 = 0; k1 + k2 <= total && k2 <= max_level; ++k2) {
                for_each_level_multiset(n - 2, total - k1 - k2, max_level, [&](const std::vector<int>& rest) {
                    std::vector<TVariable> vars{tvar(2, k1), tvar(3, k2)};
                    std::vector<int> levels{k1, k2};
                    for (int k : rest) {
                        vars.push_back(tvar(1, k));
                        levels.push_back(k);
                    }
                    add(std::move(vars), n, levels);
                });
            }
        }
    }
    return f0;
}

GenusPotential genus0_potential(const PotentialTruncation& trunc)
{
    const auto f0 = genus0_terms(trunc.max_degree, trunc.max_level);
    GenusPotential g{0, lift_to_qseries(f0, trunc.q_order), trunc};
    check_dimension(g.body, 0);
    return g;
}

SuperPolynomial<Rational> v_series(int alpha, const Truncation& trunc)
{
    const auto f0 = genus0_terms(trunc.max_degree + 2, trunc.max_level);
    const auto d1 = left_partial(f0, tvar(1, 0));
    SuperPolynomial<Rational> v({trunc.max_degree, trunc.max_level}, Rational(0));
    for (int mu = 1; mu <= 4; ++mu) {
        const int e = EtaMatrix::inverse(alpha, mu);
        if (e != 0) {
            v = v + left_partial(d1, tvar(mu, 0)) * Rational(e);
        }
    }
    return v;
}

SuperPolynomial<Rational> v4_derivative(int k, const Truncation& trunc)
{
    if (k < 0) {
        throw std::invalid_argument("negative derivative order");
    }
    const auto f0 = genus0_terms(trunc.max_degree + 2 + k, trunc.max_level);
    return truncate_degree(partial_t1_power(f0, k + 2), trunc.max_degree);
}

DescendantPolynomial compose_dressed(const QSeries& c, std::span<const SuperPolynomial<Rational>> exp_powers)
{
    const int q_order = c.order();
    if (static_cast<int>(exp_powers.size()) <= q_order) {
        throw std::invalid_argument("compose_dressed: not enough powers of exp(v4)");
    }
    int exact = kUnboundedDegree;
    std::map<SuperMonomial, std::vector<Rational>> acc;
    for (int d = 0; d <= q_order; ++d) {
        const auto& e = exp_powers[static_cast<std::size_t>(d)];
        exact = std::min(exact, e.exact_degree());
        if (sgn(c[d]) == 0) {
            continue;
        }
        for (const auto& [m, x] : e.terms()) {
            auto& slot = acc[m];
            if (slot.empty()) {
                slot.assign(static_cast<std::size_t>(q_order) + 1, Rational(0));
            }
            slot[static_cast<std::size_t>(d)] += c[d] * x;
        }
    }
    DescendantPolynomial r({exact, exp_powers[0].max_level()}, QSeries("q", q_order, Rational(0)));
    for (auto& [m, coeffs] : acc) {
        r.add_term(m, QSeries("q", std::move(coeffs)));
    }
    return r;
}

DescendantPolynomial compose_dressed_generic(const QSeries& c, const SuperPolynomial<Rational>& v4)
{
    const int q_order = c.order();
    const auto dressed = scale_by(lift_to_qseries(spoly_exp(v4), q_order), QSeries::monomial("q", q_order, 1, Rational(1)));
    const auto one = DescendantPolynomial::constant(v4.truncation(), qconst(q_order, Rational(1)));
    return series_substitute(c, dressed, one);
}

GenusPotential genus_potential(int genus, const PotentialTruncation& trunc, StationaryEngine& engine)
{
    if (genus < 0) {
        throw std::invalid_argument("negative genus");
    }
    if (genus == 0) {
        return genus0_potential(trunc);
    }
    const int n = trunc.max_degree;
    const int q_order = trunc.q_order;
    const Truncation poly = trunc.polynomial();

    // v^4_k for k <= 2g-2, each exact through degree N.
    const auto f0 = genus0_terms(n + 2 * genus, trunc.max_level);
    std::vector<SuperPolynomial<Rational>> v4;
    auto cur = partial_t1_power(f0, 2);
    for (int k = 0; k <= 2 * genus - 2; ++k) {
        v4.push_back(truncate_degree(cur, n));
        cur = left_partial(cur, tvar(1, 0));
    }

    const auto e = spoly_exp(v4[0]);
    std::vector<SuperPolynomial<Rational>> powers{SuperPolynomial<Rational>::constant(poly, Rational(1))};
    for (int d = 1; d <= q_order; ++d) {
        powers.push_back(truncate_degree(powers.back() * e, n));
    }

    DescendantPolynomial body(poly, QSeries("q", q_order, Rational(0)));
    for (const auto& lambda : partitions(2 * genus - 2)) {
        if (lambda.length() > n) {
            continue;
        }
        auto prefactor = SuperPolynomial<Rational>::constant(poly, Rational(1) / Rational(automorphism_factor(lambda)));
        for (int part : lambda.parts()) {
            prefactor = prefactor * v4[static_cast<std::size_t>(part)];
        }
        if (prefactor.is_zero()) {
            continue;
        }
        const auto c = engine.connected_series(lambda.parts(), q_order);
        body = body + lift_to_qseries(prefactor, q_order) * compose_dressed(c, powers);
    }
    if (genus == 1) {
        body = body - lift_to_qseries(v4[0], q_order) * Rational(1, 24);
    }
    if (body.exact_degree() < n) {
        throw TruncationError("F_" + std::to_string(genus) + " is not exact through degree " + std::to_string(n));
    }
    body.set_exact_degree(n);
    check_dimension(body, genus);
    return GenusPotential{genus, std::move(body), trunc};
}

ConstraintOperator make_operator(OperatorKind kind, int level)
{
    if (kind != OperatorKind::O && level < -1) {
        throw std::invalid_argument("constraint level must be at least -1");
    }
    return ConstraintOperator{kind, kind == OperatorKind::O ? 0 : level};
}

std::string to_string(const ConstraintOperator& op)
{
    switch (op.kind) {
    case OperatorKind::L: return "L_" + std::to_string(op.level);
    case OperatorKind::Ltilde: return "Ltilde_" + std::to_string(op.level);
    case OperatorKind::D: return "D_" + std::to_string(op.level);
    case OperatorKind::Dbar: return "Dbar_" + std::to_string(op.level);
    case OperatorKind::O: return "O";
    }
    return "?";
}

namespace {

struct FieldTerm {
    Rational coefficient;
    std::optional<TVariable> multiplier;
    TVariable derivative;
};

// Terms of the operator that can contribute below the projection level.
std::vector<FieldTerm> field_terms(const ConstraintOperator& op, int max_level, int keep_level)
{
    std::vector<FieldTerm> terms;
    const int k = op.level;
    auto push = [&](Rational c, std::optional<TVariable> mult, int alpha, int level) {
        if (sgn(c) == 0 || level < 0 || level > max_level) {
            return;  // no variable at negative level
        }
        if (mult && mult->level > keep_level) {
            return;
        }
        terms.push_back({std::move(c), mult, tvar(alpha, level)});
    };
    if (op.kind == OperatorKind::O) {
        push(Rational(1), std::nullopt, 4, 0);
        for (int n = 0; n + 1 <= max_level; ++n) {
            push(Rational(-1), tvar(1, n + 1), 4, n);
        }
        return terms;
    }
    const Rational lead = -Rational(factorial(static_cast<unsigned>(k + 1)));
    switch (op.kind) {
    case OperatorKind::L:
    case OperatorKind::Ltilde:
        push(lead, std::nullopt, 1, k + 1);
        for (int alpha = 1; alpha <= 4; ++alpha) {
            const int b = cohomology_class(alpha).virasoro_shift;
            for (int m = 0; m <= max_level; ++m) {
                push(pochhammer(Rational(b + m), k + 1), tvar(alpha, m), alpha, m + k);
            }
        }
        break;
    case OperatorKind::D:
        push(lead, std::nullopt, 2, k + 1);
        for (int m = 0; m <= max_level; ++m) {
            push(pochhammer(Rational(m), k + 1), tvar(1, m), 2, m + k);
            push(pochhammer(Rational(m + 1), k + 1), tvar(3, m), 4, m + k);
        }
        break;
    case OperatorKind::Dbar:
        push(lead, std::nullopt, 3, k + 1);
        for (int m = 0; m <= max_level; ++m) {
            push(pochhammer(Rational(m), k + 1), tvar(1, m), 3, m + k);
            push(-pochhammer(Rational(m + 1), k + 1), tvar(2, m), 4, m + k);
        }
        break;
    case OperatorKind::O:
        break;
    }
    return terms;
}

DescendantPolynomial expected_value(const ConstraintOperator& op, int genus, const DescendantPolynomial& like)
{
    const int q_order = like.zero().order();
    DescendantPolynomial r(like.truncation(), like.zero());
    SuperMonomial m;
    const auto one = qconst(q_order, Rational(1));
    if (op.kind == OperatorKind::O) {
        if (genus == 0) {
            const std::array<TVariable, 2> sq{tvar(1, 0), tvar(1, 0)};
            build_monomial(sq, m);
            r.add_term(m, qconst(q_order, Rational(1, 2)));
        } else if (genus == 1) {
            r.add_term(SuperMonomial{}, qconst(q_order, Rational(-1, 24)));
        }
    } else if (op.kind == OperatorKind::Ltilde && op.level == -1 && genus == 0) {
        // -eta_{ab} t^a_0 t^b_0 / 2
        for (int a = 1; a <= 4; ++a) {
            for (int b = 1; b <= 4; ++b) {
                const int e = EtaMatrix::pairing(a, b);
                if (e == 0) {
                    continue;
                }
                const std::array<TVariable, 2> vars{tvar(a, 0), tvar(b, 0)};
                const int s = build_monomial(vars, m);
                r.add_term(m, qconst(q_order, Rational(-e * s, 2)));
            }
        }
    }
    return r;
}

} // namespace

DescendantPolynomial apply_operator(const ConstraintOperator& op, const DescendantPolynomial& p)
{
    const int max_level = p.max_level();
    const bool is_o = op.kind == OperatorKind::O;
    if (!is_o && op.level < -1) {
        throw std::invalid_argument("constraint level must be at least -1");
    }
    if (!is_o && op.level + 1 > max_level) {
        throw TruncationError(to_string(op) + " needs descendant level " + std::to_string(op.level + 1) + " but the bound is "
                              + std::to_string(max_level));
    }
    const int keep = is_o ? max_level : max_level - std::max(op.level, 0);
    DescendantPolynomial r({p.exact_degree(), max_level}, p.zero());
    for (const auto& term : field_terms(op, max_level, keep)) {
        auto t = left_partial(p, term.derivative);
        if (term.multiplier) {
            t = mul_variable(*term.multiplier, t);
        }
        r = r + t * term.coefficient;
    }
    if (is_o) {
        r = r - map_coefficients(p, p.zero(), [](const QSeries& c) { return series_derivative(c, DerivativeMode::x_d_dx); });
    }
    return project_levels(r, keep);
}

DescendantPolynomial apply_constraint(const ConstraintOperator& op, const GenusPotential& f)
{
    const auto applied = apply_operator(op, f.body);
    if (op.kind == OperatorKind::L) {
        // L_k e^F = 0 splits into L~_k F_g + delta_{k,-1} delta_{g,0} eta t t / 2 = 0.
        return applied - expected_value(make_operator(OperatorKind::Ltilde, op.level), f.genus, applied);
    }
    return applied - expected_value(op, f.genus, applied);
}

DescendantPolynomial apply_divisor(const GenusPotential& f)
{
    return apply_constraint(make_operator(OperatorKind::O), f);
}

DescendantPolynomial constraint_on_v4(const ConstraintOperator& op, int d, const PotentialTruncation& trunc)
{
    const auto v = lift_to_qseries(v4_derivative(d, trunc.polynomial()), trunc.q_order);
    auto r = apply_operator(op, v);
    if (op.kind == OperatorKind::O && d == 0) {
        DescendantPolynomial one(r.truncation(), r.zero());
        one.add_term(SuperMonomial{}, qconst(trunc.q_order, Rational(1)));
        r = r - one;
    }
    return r;
}

Rational correlator(const GenusPotential& f, int degree, std::span<const Insertion> insertions)
{
    std::vector<TVariable> vars;
    int weight = 0;
    for (const auto& ins : insertions) {
        if (ins.level < 0) {
            throw std::invalid_argument("negative descendant level in correlator");
        }
        weight += 2 * ins.level + cohomology_class(ins.alpha).twice_half_degree - 2;
        vars.push_back(TVariable{ins.alpha, ins.level});
    }
    if (degree < 0 || weight != 4 * f.genus - 4) {
        return Rational(0);
    }
    if (static_cast<int>(vars.size()) > f.trunc.max_degree || degree > f.trunc.q_order) {
        throw TruncationError("correlator lies outside the truncation");
    }
    for (const auto& v : vars) {
        if (v.level > f.trunc.max_level) {
            throw TruncationError("correlator insertion beyond the descendant bound");
        }
    }
    SuperMonomial m;
    const int sign = build_monomial(vars, m);
    if (sign == 0) {
        return Rational(0);
    }
    return f.body.coefficient(m)[degree] * Rational(m.automorphism_count()) * sign;
}

SuperPolynomial<Rational> two_point_residual(TVariable first, TVariable second, const Truncation& trunc)
{
    const auto f0 = genus0_terms(trunc.max_degree + 2, trunc.max_level);
    const auto lhs = left_partial(left_partial(f0, second), first);
    const auto omega = restrict(lhs, [](TVariable v) { return v.level >= 1; });
    std::array<SuperPolynomial<Rational>, 4> v = {v_series(1, trunc), v_series(2, trunc), v_series(3, trunc), v_series(4, trunc)};
    using P = SuperPolynomial<Rational>;
    const P rhs = substitute_variables<P>(
        omega, [&](TVariable t) { return v[static_cast<std::size_t>(t.alpha - 1)]; },
        [&](const Rational& c) { return P::constant(trunc, c); });
    return lhs - rhs;
}

DescendantPolynomial genus_two_point(int alpha, const GenusPotential& f)
{
    const auto d1 = left_partial(f.body, tvar(1, 0));
    DescendantPolynomial r({d1.exact_degree() - 1, d1.max_level()}, d1.zero());
    for (int mu = 1; mu <= 4; ++mu) {
        const int e = EtaMatrix::inverse(alpha, mu);
        if (e != 0) {
            r = r + left_partial(d1, tvar(mu, 0)) * Rational(e);
        }
    }
    return r;
}

DescendantPolynomial stationary_restriction(const GenusPotential& f)
{
    return restrict(f.body, [](TVariable v) { return v.alpha != 4 || v.level == 0; });
}

DescendantPolynomial stationary_generating_function(int genus, const PotentialTruncation& trunc, StationaryEngine& engine)
{
    if (genus < 1) {
        throw std::invalid_argument("stationary generating function needs genus >= 1");
    }
    DescendantPolynomial r(trunc.polynomial(), QSeries("q", trunc.q_order, Rational(0)));
    const int total = 2 * genus - 2;
    for (int n = 0; n <= std::min(trunc.max_degree, std::max(total, 0)); ++n) {
        // levels k_i >= 1 written as 1 + (non-negative multiset)
        for_each_level_multiset(n, total - n, trunc.max_level - 1, [&](const std::vector<int>& shifted) {
            std::vector<TVariable> vars;
            StationaryProfile profile;
            for (int s : shifted) {
                vars.push_back(tvar(4, s + 1));
                profile.push_back(s + 1);
            }
            SuperMonomial m;
            build_monomial(vars, m);
            r.add_term(m, engine.connected_series(profile, trunc.q_order) * (Rational(1) / Rational(m.automorphism_count())));
        });
    }
    return r;
}

} // namespace ellgw
