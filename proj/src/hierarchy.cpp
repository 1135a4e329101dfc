#include "ellgw/hierarchy.hpp"

#include <map>

#include "ellgw/combinatorics.hpp"

namespace ellgw {

namespace {

Truncation jet_truncation(const JetConfig& cfg)
{
    return {kUnboundedDegree, cfg.jet_order};
}

DiffPoly power_over_factorial(const DiffPoly& x, int e)
{
    DiffPoly r = DiffPoly::constant(x.truncation(), ring_traits<QSeries>::one_like(x.zero()));
    for (int i = 0; i < e; ++i) {
        r = r * x;
    }
    return r * (Rational(1) / Rational(factorial(static_cast<unsigned>(e))));
}

int jet_order_of(const DiffPoly& e)
{
    int k = -1;
    for (const auto& [m, c] : e.terms()) {
        k = std::max(k, m.max_level());
    }
    return k;
}

} // namespace

DiffPoly diff_constant(const JetConfig& cfg, const Rational& c)
{
    DiffPoly r(jet_truncation(cfg), QSeries("q", cfg.q_order, Rational(0)));
    r.add_term(SuperMonomial{}, QSeries::constant("q", cfg.q_order, c));
    return r;
}

DiffPoly diff_variable(const JetConfig& cfg, JetVariable u)
{
    return DiffPoly::variable(jet_truncation(cfg), u, QSeries::constant("q", cfg.q_order, Rational(1)));
}

DiffPoly principal_p(int alpha, int beta, int b, const JetConfig& cfg)
{
    cohomology_class(alpha);
    cohomology_class(beta);
    if (b < 0) {
        throw std::invalid_argument("negative flow index");
    }
    const auto u1 = diff_variable(cfg, jet(1, 0));
    const auto top = power_over_factorial(u1, b + 1);
    const auto mid = power_over_factorial(u1, b);
    DiffPoly zero(jet_truncation(cfg), QSeries("q", cfg.q_order, Rational(0)));
    auto u = [&](int a) { return diff_variable(cfg, jet(a, 0)); };
    switch (alpha) {
    case 1:
        return beta == 1 ? top : zero;
    case 2:
        return beta == 1 ? u(2) * mid : beta == 2 ? top : zero;
    case 3:
        return beta == 1 ? u(3) * mid : beta == 3 ? top : zero;
    default:
        break;
    }
    switch (beta) {
    case 1: {
        auto p = u(4) * mid;
        if (b >= 1) {
            p = p + u(2) * u(3) * power_over_factorial(u1, b - 1);
        }
        return p;
    }
    case 2: return u(3) * mid;
    case 3: return -(u(2) * mid);
    default: return top;
    }
}

DiffPoly jet_partial(const DiffPoly& e, JetVariable u)
{
    auto r = left_partial(e, u);
    if (u == jet(4, 0)) {
        r = r + map_coefficients(e, e.zero(), [](const QSeries& c) { return series_derivative(c, DerivativeMode::x_d_dx); });
    }
    return r;
}

DiffPoly total_x_derivative(const DiffPoly& e)
{
    const int top = e.max_level();
    DiffPoly r(e.truncation(), e.zero());
    for (int alpha = 1; alpha <= 4; ++alpha) {
        for (int k = 0; k <= top; ++k) {
            const auto d = jet_partial(e, jet(alpha, k));
            if (d.is_zero()) {
                continue;
            }
            if (k == top) {
                throw TruncationError("x-derivative needs jet order " + std::to_string(top + 1));
            }
            r = r + mul_variable(jet(alpha, k + 1), d);
        }
    }
    return r;
}

DiffPoly x_derivative(const DiffPoly& e, int n)
{
    DiffPoly r = e;
    for (int i = 0; i < n; ++i) {
        r = total_x_derivative(r);
    }
    return r;
}

DiffPoly flow_apply(int beta, int b, const DiffPoly& e)
{
    const JetConfig cfg{e.max_level(), e.zero().order()};
    DiffPoly r(e.truncation(), e.zero());
    const int used = jet_order_of(e);
    for (int alpha = 1; alpha <= 4; ++alpha) {
        DiffPoly image = total_x_derivative(principal_p(alpha, beta, b, cfg));
        for (int k = 0; k <= used; ++k) {
            if (k > 0) {
                image = total_x_derivative(image);
            }
            const auto d = jet_partial(e, jet(alpha, k));
            if (!d.is_zero()) {
                r = r + image * d;
            }
        }
    }
    return r;
}

DiffPoly commutator_check(int beta, int b, int gamma, int c, int alpha, const JetConfig& cfg)
{
    const auto u = diff_variable(cfg, jet(alpha, 0));
    const bool both_odd = cohomology_class(beta).odd && cohomology_class(gamma).odd;
    const auto bc = flow_apply(beta, b, flow_apply(gamma, c, u));
    const auto cb = flow_apply(gamma, c, flow_apply(beta, b, u));
    return both_odd ? bc + cb : bc - cb;
}

DiffPoly genus_jet_potential(int genus, const JetConfig& cfg, StationaryEngine& engine)
{
    if (genus < 1) {
        throw std::invalid_argument("jet potential needs genus >= 1");
    }
    DiffPoly g(jet_truncation(cfg), QSeries("q", cfg.q_order, Rational(0)));
    for (const auto& lambda : partitions(2 * genus - 2)) {
        DiffPoly term(jet_truncation(cfg), g.zero());
        term.add_term(SuperMonomial{}, engine.connected_series(lambda.parts(), cfg.q_order)
                                           * (Rational(1) / Rational(automorphism_factor(lambda))));
        for (int part : lambda.parts()) {
            term = term * diff_variable(cfg, jet(4, part));
        }
        g = g + term;
    }
    if (genus == 1) {
        g = g - diff_variable(cfg, jet(4, 0)) * Rational(1, 24);
    }
    return g;
}

std::vector<DiffPoly> miura_w(int alpha, int max_genus, const JetConfig& cfg, StationaryEngine& engine)
{
    std::vector<DiffPoly> w{diff_variable(cfg, jet(alpha, 0))};
    for (int g = 1; g <= max_genus; ++g) {
        const auto dx = total_x_derivative(genus_jet_potential(g, cfg, engine));
        DiffPoly term(jet_truncation(cfg), w[0].zero());
        for (int mu = 1; mu <= 4; ++mu) {
            const int e = EtaMatrix::inverse(alpha, mu);
            if (e != 0) {
                term = term + flow_apply(mu, 0, dx) * Rational(e);
            }
        }
        w.push_back(term);
    }
    return w;
}

DescendantPolynomial evaluate_on_jets(const DiffPoly& e, const PotentialTruncation& trunc)
{
    const int n = trunc.max_degree;
    const int kmax = std::max(jet_order_of(e), 0);
    const Truncation poly = trunc.polynomial();

    // v^alpha_k exact through degree N for k <= kmax.
    const auto f0 = genus0_terms(n + 2 + kmax, trunc.max_level);
    const auto d1 = left_partial(f0, tvar(1, 0));
    std::map<TVariable, DescendantPolynomial> images;
    SuperPolynomial<Rational> v4(poly, Rational(0));
    for (int alpha = 1; alpha <= 4; ++alpha) {
        SuperPolynomial<Rational> v({d1.exact_degree() - 1, trunc.max_level}, Rational(0));
        for (int mu = 1; mu <= 4; ++mu) {
            const int s = EtaMatrix::inverse(alpha, mu);
            if (s != 0) {
                v = v + left_partial(d1, tvar(mu, 0)) * Rational(s);
            }
        }
        if (alpha == 4) {
            v4 = truncate_degree(v, n);
        }
        for (int k = 0; k <= kmax; ++k) {
            images.emplace(jet(alpha, k), lift_to_qseries(truncate_degree(v, n), trunc.q_order));
            v = left_partial(v, tvar(1, 0));
        }
    }

    const auto e4 = spoly_exp(v4);
    std::vector<SuperPolynomial<Rational>> powers{SuperPolynomial<Rational>::constant(poly, Rational(1))};
    for (int d = 1; d <= trunc.q_order; ++d) {
        powers.push_back(truncate_degree(powers.back() * e4, n));
    }

    if (e.zero().order() < trunc.q_order) {
        throw TruncationError("jet coefficients are shorter than the requested q-order");
    }
    return substitute_variables<DescendantPolynomial>(
        e, [&](TVariable u) { return images.at(u); },
        [&](const QSeries& c) { return compose_dressed(c.truncate(trunc.q_order), powers); });
}

DescendantPolynomial table_residual(int alpha, int beta, int b, const PotentialTruncation& trunc)
{
    const JetConfig cfg{b + 2, trunc.q_order};
    const auto lhs = left_partial(lift_to_qseries(v_series(alpha, {trunc.max_degree + 1, trunc.max_level}), trunc.q_order),
                                  tvar(beta, b));
    const auto rhs = evaluate_on_jets(total_x_derivative(principal_p(alpha, beta, b, cfg)), trunc);
    const int d = std::min(lhs.exact_degree(), rhs.exact_degree());
    return truncate_degree(lhs, d) - truncate_degree(rhs, d);
}

DescendantPolynomial table_value_residual(int alpha, int beta, int b, const PotentialTruncation& trunc)
{
    const JetConfig cfg{b + 2, trunc.q_order};
    const auto f0 = genus0_terms(trunc.max_degree + 2, trunc.max_level);
    SuperPolynomial<Rational> lhs({trunc.max_degree, trunc.max_level}, Rational(0));
    for (int mu = 1; mu <= 4; ++mu) {
        const int s = EtaMatrix::inverse(alpha, mu);
        if (s != 0) {
            lhs = lhs + left_partial(left_partial(f0, tvar(mu, 0)), tvar(beta, b)) * Rational(s);
        }
    }
    const auto rhs = evaluate_on_jets(principal_p(alpha, beta, b, cfg), trunc);
    const auto l = lift_to_qseries(lhs, trunc.q_order);
    const int d = std::min(l.exact_degree(), rhs.exact_degree());
    return truncate_degree(l, d) - truncate_degree(rhs, d);
}

} // namespace ellgw
