#include "doctest.h"

#include <random>

#include "ellgw/combinatorics.hpp"
#include "ellgw/potential.hpp"

using namespace ellgw;

namespace {

// Oracle: genus-0, degree-0 correlators straight from the closed formula,
// with the sign of the permutation that brings the odd pair into (2, 3) order.
Rational genus0_oracle(const std::vector<Insertion>& ins)
{
    const int n = static_cast<int>(ins.size());
    int fours = 0, twos = 0, threes = 0, ksum = 0;
    int pos2 = -1, pos3 = -1;
    Integer kfact = 1;
    for (int i = 0; i < n; ++i) {
        const auto& x = ins[static_cast<std::size_t>(i)];
        fours += x.alpha == 4;
        twos += x.alpha == 2;
        threes += x.alpha == 3;
        if (x.alpha == 2) {
            pos2 = i;
        }
        if (x.alpha == 3) {
            pos3 = i;
        }
        ksum += x.level;
        kfact *= factorial(static_cast<unsigned>(x.level));
    }
    if (n < 3 || ksum != n - 3) {
        return 0;
    }
    const Rational value = Rational(factorial(static_cast<unsigned>(n - 3))) / Rational(kfact);
    if (fours == 1 && twos == 0 && threes == 0) {
        return value;
    }
    if (fours == 0 && twos == 1 && threes == 1) {
        return pos2 < pos3 ? value : -value;
    }
    return 0;
}

DescendantPolynomial zero_like(const DescendantPolynomial& p)
{
    return DescendantPolynomial(p.truncation(), p.zero());
}

} // namespace

TEST_CASE("cohomology basis and pairing")
{
    CHECK(cohomology_class(2).odd);
    CHECK(!cohomology_class(4).odd);
    CHECK(cohomology_class(4).twice_half_degree == 2);
    CHECK(cohomology_class(2).virasoro_shift == 1);
    CHECK(cohomology_class(3).virasoro_shift == 0);
    CHECK(EtaMatrix::pairing(3, 2) == -1);
    for (int a = 1; a <= 4; ++a) {
        for (int b = 1; b <= 4; ++b) {
            int s = 0;
            for (int m = 1; m <= 4; ++m) {
                s += EtaMatrix::inverse(a, m) * EtaMatrix::pairing(m, b);
            }
            CHECK(s == (a == b ? 1 : 0));
        }
    }
    CHECK_THROWS_AS(cohomology_class(5), std::invalid_argument);
}

TEST_CASE("genus-0 correlators")
{
    const auto f0 = genus0_potential({});
    CHECK(correlator(f0, 0, std::vector<Insertion>{{0, 4}, {0, 1}, {0, 1}}) == 1);
    CHECK(correlator(f0, 0, std::vector<Insertion>{{1, 4}, {1, 1}, {0, 1}, {0, 1}, {0, 1}}) == 2);
    CHECK(correlator(f0, 0, std::vector<Insertion>{{2, 4}, {0, 1}, {0, 1}}) == 0);
    CHECK(correlator(f0, 0, std::vector<Insertion>{{0, 2}, {0, 3}, {0, 1}}) == 1);
    CHECK(correlator(f0, 0, std::vector<Insertion>{{0, 3}, {0, 2}, {0, 1}}) == -1);
    CHECK(correlator(f0, 1, std::vector<Insertion>{{0, 4}, {0, 1}, {0, 1}}) == 0);
    CHECK_THROWS_AS(correlator(f0, 0, std::vector<Insertion>{{3, 4}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}}),
                    TruncationError);
    for (const auto& [m, c] : f0.body.terms()) {
        CHECK(c.valuation() == 0);
        CHECK(c == QSeries::constant("q", c.order(), c[0]));
    }
}

TEST_CASE("genus-0 correlators match the closed formula (property)")
{
    const auto f0 = genus0_potential({});
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> alpha(1, 4), level(0, 2), len(3, 5);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<Insertion> ins(static_cast<std::size_t>(len(rng)));
        for (auto& x : ins) {
            x = {level(rng), alpha(rng)};
        }
        int weight = 0;
        for (const auto& x : ins) {
            weight += 2 * x.level + cohomology_class(x.alpha).twice_half_degree - 2;
        }
        INFO("trial " << trial);
        if (weight != -4) {
            CHECK(correlator(f0, 0, ins) == 0);
            continue;
        }
        CHECK(correlator(f0, 0, ins) == genus0_oracle(ins));
    }
}

TEST_CASE("v series")
{
    const Truncation t{5, 4};
    for (int alpha = 1; alpha <= 4; ++alpha) {
        const auto v = v_series(alpha, t);
        CHECK(v.coefficient(SuperMonomial{}) == 0);
        CHECK(v.coefficient(SuperMonomial::of(tvar(alpha, 0))) == 1);
    }
    for (int k = 0; k <= 4; ++k) {
        const auto v = v4_derivative(k, t);
        const auto r = restrict(v, [](TVariable x) { return x.alpha != 4; });
        CHECK(r == SuperPolynomial<Rational>::variable({r.exact_degree(), 4}, tvar(4, k), Rational(1)));
    }
    CHECK(v4_derivative(0, t) == v_series(4, t));
    CHECK_THROWS_AS(v4_derivative(-1, t), std::invalid_argument);
}

TEST_CASE("genus-0 two-point functions depend only on v")
{
    const Truncation t{5, 4};
    for (int a = 1; a <= 4; ++a) {
        for (int b = 1; b <= 4; ++b) {
            for (int i = 0; i <= 2; ++i) {
                for (int j = 0; j <= 2; ++j) {
                    CHECK(two_point_residual(tvar(a, i), tvar(b, j), t).is_zero());
                }
            }
        }
    }
}

TEST_CASE("higher genus potentials")
{
    StationaryEngine engine;
    const PotentialTruncation tr{};
    const auto f1 = genus_potential(1, tr, engine);
    const auto c0 = engine.connected_series({}, tr.q_order);
    CHECK(f1.body.coefficient(SuperMonomial{}) == c0);

    for (int d = 1; d <= 5; ++d) {
        CHECK(correlator(f1, d, std::vector<Insertion>{{0, 4}}) == Rational(divisor_power_sum(static_cast<std::uint64_t>(d), 1)));
        // string and dilaton equations
        CHECK(correlator(f1, d, std::vector<Insertion>{{0, 1}, {1, 4}}) == correlator(f1, d, std::vector<Insertion>{{0, 4}}));
        CHECK(correlator(f1, d, std::vector<Insertion>{{1, 1}, {0, 4}}) == correlator(f1, d, std::vector<Insertion>{{0, 4}}));
        CHECK(correlator(f1, d, std::vector<Insertion>{{1, 1}}) == 0);
    }
    CHECK(correlator(f1, 0, std::vector<Insertion>{{0, 4}}) == Rational(-1, 24));
    CHECK(correlator(f1, 2, std::vector<Insertion>{{1, 4}}) == 0);

    const auto f2 = genus_potential(2, tr, engine);
    const auto c2 = engine.connected_series({2}, tr.q_order);
    const auto c11 = engine.connected_series({1, 1}, tr.q_order);
    for (int d = 0; d <= tr.q_order; ++d) {
        CHECK(correlator(f2, d, std::vector<Insertion>{{2, 4}}) == c2[d]);
        CHECK(correlator(f2, d, std::vector<Insertion>{{1, 4}, {1, 4}}) == c11[d]);
        CHECK(correlator(f2, d, std::vector<Insertion>{{1, 1}, {2, 4}}) == 3 * c2[d]);
        CHECK(correlator(f2, d, std::vector<Insertion>{{0, 1}, {3, 4}}) == c2[d]);
    }
    CHECK(correlator(f2, 1, std::vector<Insertion>{{2, 4}, {0, 4}}) == c2[1]);

    for (const auto& f : {f1, f2}) {
        for (const auto& [m, c] : f.body.terms()) {
            CHECK(dimension_weight(m) == 4 * f.genus - 4);
        }
    }
}

TEST_CASE("dressed composition agrees with generic substitution")
{
    StationaryEngine engine;
    const Truncation t{4, 3};
    const auto v4 = v4_derivative(0, t);
    const auto e = spoly_exp(v4);
    std::vector<SuperPolynomial<Rational>> powers{SuperPolynomial<Rational>::constant(t, Rational(1))};
    for (int d = 1; d <= 5; ++d) {
        powers.push_back(powers.back() * e);
    }
    for (const StationaryProfile& p : {StationaryProfile{}, StationaryProfile{2}, StationaryProfile{1, 1}}) {
        const auto c = engine.connected_series(p, 5);
        const auto fast = compose_dressed(c, powers);
        const auto slow = compose_dressed_generic(c, v4);
        CHECK(fast == truncate_degree(slow, fast.exact_degree()));
    }
}

TEST_CASE("constraint residuals")
{
    StationaryEngine engine;
    const PotentialTruncation tr{};
    const auto f0 = genus0_potential(tr);
    const auto f1 = genus_potential(1, tr, engine);
    const auto f2 = genus_potential(2, tr, engine);

    // string equation with its source
    CHECK(apply_constraint(make_operator(OperatorKind::Ltilde, -1), f0).is_zero());
    CHECK(apply_constraint(make_operator(OperatorKind::L, -1), f0).is_zero());
    CHECK(apply_divisor(f0).is_zero());
    CHECK(apply_divisor(f1).is_zero());
    CHECK(apply_divisor(f2).is_zero());

    for (const auto* f : {&f0, &f1, &f2}) {
        for (auto kind : {OperatorKind::Ltilde, OperatorKind::D, OperatorKind::Dbar}) {
            for (int k = 0; k <= 3; ++k) {
                INFO(to_string(make_operator(kind, k)) << " on F_" << f->genus);
                const auto r = apply_constraint(make_operator(kind, k), *f);
                CHECK(r.is_zero());
                CHECK(r.exact_degree() == tr.max_degree - 1);
            }
        }
    }
    for (const auto* f : {&f1, &f2}) {
        for (auto kind : {OperatorKind::Ltilde, OperatorKind::D, OperatorKind::Dbar}) {
            CHECK(apply_constraint(make_operator(kind, -1), *f).is_zero());
        }
    }

    // The odd operators at k = -1 carry no source term, while F_0 contains
    // t1_0 t2_0 t3_0; the residual is exactly the missing source.
    SuperMonomial m13, m12;
    multiply(SuperMonomial::of(tvar(1, 0)), SuperMonomial::of(tvar(3, 0)), m13);
    multiply(SuperMonomial::of(tvar(1, 0)), SuperMonomial::of(tvar(2, 0)), m12);
    const auto rd = apply_constraint(make_operator(OperatorKind::D, -1), f0);
    const auto rdb = apply_constraint(make_operator(OperatorKind::Dbar, -1), f0);
    CHECK(rd.size() == 1);
    CHECK(rd.coefficient(m13) == QSeries::constant("q", tr.q_order, Rational(-1)));
    CHECK(rdb.size() == 1);
    CHECK(rdb.coefficient(m12) == QSeries::constant("q", tr.q_order, Rational(1)));

    CHECK_THROWS_AS(apply_constraint(make_operator(OperatorKind::D, 4), f0), TruncationError);
    CHECK_THROWS_AS(make_operator(OperatorKind::L, -2), std::invalid_argument);
}

TEST_CASE("constraints detect a perturbed potential")
{
    StationaryEngine engine;
    const PotentialTruncation tr{};
    auto f1 = genus_potential(1, tr, engine);
    auto broken = f1;
    // change <tau_0(gamma_1) tau_1(gamma_4)>_{1,2}
    SuperMonomial m;
    multiply(SuperMonomial::of(tvar(1, 0)), SuperMonomial::of(tvar(4, 1)), m);
    auto delta = zero_like(f1.body);
    delta.add_term(m, QSeries::monomial("q", tr.q_order, 2, Rational(1)));
    broken.body = broken.body + delta;
    CHECK(!apply_constraint(make_operator(OperatorKind::Ltilde, -1), broken).is_zero());
    // change <tau_0(gamma_4)>_{1,3}
    broken = f1;
    delta = zero_like(f1.body);
    delta.add_term(SuperMonomial::of(tvar(4, 0)), QSeries::monomial("q", tr.q_order, 3, Rational(1)));
    broken.body = broken.body + delta;
    CHECK(!apply_divisor(broken).is_zero());
}

TEST_CASE("constraints annihilate v4_d")
{
    const PotentialTruncation tr{};
    for (int d = 0; d <= 4; ++d) {
        for (auto kind : {OperatorKind::Ltilde, OperatorKind::D, OperatorKind::Dbar}) {
            for (int k = -1; k <= 3; ++k) {
                INFO(to_string(make_operator(kind, k)) << " on v4_" << d);
                CHECK(constraint_on_v4(make_operator(kind, k), d, tr).is_zero());
            }
        }
        CHECK(constraint_on_v4(make_operator(OperatorKind::O), d, tr).is_zero());
    }
}

TEST_CASE("stationary restriction closes up")
{
    StationaryEngine engine;
    const PotentialTruncation tr{};
    for (int g = 1; g <= 2; ++g) {
        const auto f = genus_potential(g, tr, engine);
        CHECK(stationary_restriction(f) == stationary_generating_function(g, tr, engine));
    }
    CHECK_THROWS_AS(stationary_generating_function(0, tr, engine), std::invalid_argument);
}

TEST_CASE("genus-2 two-point correction")
{
    StationaryEngine engine;
    const PotentialTruncation tr{};
    const auto f1 = genus_potential(1, tr, engine);
    const auto w = genus_two_point(4, f1);
    CHECK(w == left_partial(left_partial(f1.body, tvar(1, 0)), tvar(1, 0)));
    CHECK(w.exact_degree() == tr.max_degree - 2);
}
