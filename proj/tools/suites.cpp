#include "suites.hpp"

#include <algorithm>
#include <chrono>

#include "ellgw/combinatorics.hpp"

namespace ellgw::app {

namespace {

std::string genus_label(int g)
{
    return "F_" + std::to_string(g);
}

std::string profile_label(const StationaryProfile& p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += (i ? "," : "") + std::to_string(p[i]);
    }
    return s + ")";
}

GenusPotential potential_of(int g, const PotentialTruncation& trunc, StationaryEngine& engine)
{
    return g == 0 ? genus0_potential(trunc) : genus_potential(g, trunc, engine);
}

QSeries sigma_over_n(int q_order)
{
    std::vector<Rational> c{0};
    for (int n = 1; n <= q_order; ++n) {
        c.push_back(make_rational(Integer(divisor_power_sum(static_cast<std::uint64_t>(n), 1)), Integer(n)));
    }
    return QSeries("q", std::move(c));
}

QSeries partition_counts(int q_order)
{
    std::vector<Rational> c;
    for (int d = 0; d <= q_order; ++d) {
        c.emplace_back(static_cast<long>(partitions(d).size()));
    }
    return QSeries("q", std::move(c));
}

CheckResult check_form(std::string name, const QSeries& s, int weight, const QuasimodularForm& expected)
{
    const auto dec = quasimodular_decompose(s, weight, s.order());
    std::string detail;
    if (!(dec.form == expected)) {
        for (const auto& [m, c] : dec.form.coefficients) {
            detail += monomial_name(m) + ":" + to_string(c) + " ";
        }
    } else if (dec.surplus < 3) {
        detail = "surplus " + std::to_string(dec.surplus);
    }
    return check_true(std::move(name) + " (surplus " + std::to_string(dec.surplus) + ")", detail.empty(), detail);
}

std::vector<CheckResult> criterion_stationary_closed_forms()
{
    StationaryEngine engine;
    const QuasimodularForm c2{4, {{{2, 0, 0}, Rational(1, 2)}, {{0, 1, 0}, Rational(1, 12)}}};
    const QuasimodularForm c11{6, {{{3, 0, 0}, Rational(-8, 3)}, {{1, 1, 0}, Rational(2, 3)}, {{0, 0, 1}, Rational(7, 180)}}};
    return {check_equal("C_(2) = E2^2/2 + E4/12 through q^10", engine.connected_series({2}, 10), expand(c2, 10)),
            check_equal("C_(1,1) = -8/3 E2^3 + 2/3 E2 E4 + 7/180 E6 through q^8", engine.connected_series({1, 1}, 8), expand(c11, 8))};
}

std::vector<CheckResult> criterion_decomposition()
{
    StationaryEngine engine;
    const QuasimodularForm c2{4, {{{2, 0, 0}, Rational(1, 2)}, {{0, 1, 0}, Rational(1, 12)}}};
    const QuasimodularForm c11{6, {{{3, 0, 0}, Rational(-8, 3)}, {{1, 1, 0}, Rational(2, 3)}, {{0, 0, 1}, Rational(7, 180)}}};
    return {check_form("decompose C_(2)", engine.connected_series({2}, 10), 4, c2),
            check_form("decompose C_(1,1)", engine.connected_series({1, 1}, 8), 6, c11)};
}

std::vector<CheckResult> criterion_empty_profile()
{
    StationaryEngine engine;
    return {check_equal("C_() = sum sigma(n)/n q^n through q^20", engine.connected_series({}, 20), sigma_over_n(20)),
            check_equal("disconnected n=0 series = partition numbers through q^20", engine.disconnected_series({}, 20), partition_counts(20))};
}

std::vector<CheckResult> criterion_reductions()
{
    StationaryEngine engine;
    std::vector<CheckResult> out;
    for (const auto& p : profiles_up_to(2, 8)) {
        auto with = p;
        with.push_back(-2);
        out.push_back(check_equal("append -2 to " + profile_label(p), engine.disconnected_series(with, 6), engine.disconnected_series(p, 6)));
    }
    out.push_back(check_equal("C_(-2) = 1", engine.connected_series({-2}, 6), QSeries::constant("q", 6, Rational(1))));
    const auto c = engine.connected_series({}, 10);
    const auto rhs = series_derivative(c, DerivativeMode::x_d_dx) - QSeries::constant("q", 10, Rational(1, 24));
    out.push_back(check_equal("C_(0) = q d/dq C_() - 1/24 through q^10", engine.connected_series({0}, 10), rhs));
    return out;
}

std::vector<CheckResult> criterion_constraints()
{
    StationaryEngine engine;
    const PotentialTruncation trunc{5, 4, 6};
    auto out = virasoro_suite(VirasoroSelection{}, trunc, engine);
    auto div = divisor_suite({0, 1, 2}, trunc, engine);
    out.insert(out.end(), div.begin(), div.end());
    return out;
}

std::vector<CheckResult> criterion_reconstruction()
{
    StationaryEngine engine;
    const PotentialTruncation trunc{5, 4, 6};
    std::vector<CheckResult> out;
    for (int g = 1; g <= 2; ++g) {
        const auto f = genus_potential(g, trunc, engine);
        out.push_back(check_zero("restrict " + genus_label(g) + " to stationary variables",
                                 stationary_restriction(f) - stationary_generating_function(g, trunc, engine)));
    }
    return out;
}

std::vector<CheckResult> criterion_hierarchy()
{
    return hierarchy_suite(2, PotentialTruncation{5, 4, 6}, JetConfig{5, 6});
}

std::vector<CheckResult> criterion_miura()
{
    StationaryEngine engine;
    return miura_suite({1}, {4}, PotentialTruncation{5, 4, 6}, JetConfig{6, 6}, engine);
}

std::vector<CheckResult> criterion_roundtrip()
{
    return roundtrip_suite(profiles_up_to(3, 8), 6, 3);
}

} // namespace

Json checks_to_json(const std::vector<CheckResult>& checks)
{
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j{{"name", c.name}, {"pass", c.pass}};
        if (!c.offending.empty()) {
            j["offending"] = c.offending;
        }
        if (!c.residual.is_null()) {
            j["residual"] = c.residual;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

bool all_pass(const std::vector<CheckResult>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

CheckResult check_zero(std::string name, const DescendantPolynomial& residual)
{
    CheckResult r{std::move(name), residual.is_zero(), {}, nullptr};
    if (!r.pass) {
        const auto& [m, c] = *residual.terms().begin();
        r.offending = m.to_string() + " : " + series_to_text(c);
        r.residual = polynomial_to_json(residual);
    }
    return r;
}

CheckResult check_equal(std::string name, const QSeries& lhs, const QSeries& rhs)
{
    CheckResult r{std::move(name), lhs == rhs, {}, nullptr};
    if (!r.pass) {
        if (lhs.order() != rhs.order()) {
            r.offending = "orders " + std::to_string(lhs.order()) + " vs " + std::to_string(rhs.order());
        } else {
            const auto diff = lhs - rhs;
            const int v = diff.valuation();
            r.offending = "q^" + std::to_string(v) + " : " + to_string(lhs[v]) + " vs " + to_string(rhs[v]);
            r.residual = series_to_json(diff);
        }
    }
    return r;
}

CheckResult check_true(std::string name, bool ok, std::string detail)
{
    return CheckResult{std::move(name), ok, ok ? std::string() : std::move(detail), nullptr};
}

std::vector<CheckResult> virasoro_suite(const VirasoroSelection& sel, const PotentialTruncation& trunc, StationaryEngine& engine)
{
    std::vector<CheckResult> out;
    for (int g : sel.genera) {
        const auto f = potential_of(g, trunc, engine);
        for (auto kind : sel.kinds) {
            for (int k : sel.levels) {
                const auto op = make_operator(kind, k);
                out.push_back(check_zero(to_string(op) + " " + genus_label(g), apply_constraint(op, f)));
            }
        }
    }
    for (auto kind : sel.kinds) {
        for (int k : sel.levels) {
            const auto op = make_operator(kind, k);
            for (int d = 0; d <= trunc.max_level; ++d) {
                out.push_back(check_zero(to_string(op) + " v4_" + std::to_string(d), constraint_on_v4(op, d, trunc)));
            }
        }
    }
    return out;
}

std::vector<CheckResult> divisor_suite(const std::vector<int>& genera, const PotentialTruncation& trunc, StationaryEngine& engine)
{
    std::vector<CheckResult> out;
    for (int g : genera) {
        out.push_back(check_zero("O " + genus_label(g), apply_divisor(potential_of(g, trunc, engine))));
    }
    const auto op = make_operator(OperatorKind::O);
    for (int d = 0; d <= trunc.max_level; ++d) {
        out.push_back(check_zero("O v4_" + std::to_string(d), constraint_on_v4(op, d, trunc)));
    }
    return out;
}

std::vector<CheckResult> hierarchy_suite(int b_max, const PotentialTruncation& trunc, const JetConfig& jets)
{
    std::vector<CheckResult> out;
    for (int alpha = 1; alpha <= 4; ++alpha) {
        for (int beta = 1; beta <= 4; ++beta) {
            for (int b = 0; b <= b_max; ++b) {
                const std::string tag = std::to_string(alpha) + " " + std::to_string(beta) + "," + std::to_string(b);
                out.push_back(check_zero("dv/dt table " + tag, table_residual(alpha, beta, b, trunc)));
                out.push_back(check_zero("P table " + tag, table_value_residual(alpha, beta, b, trunc)));
            }
        }
    }
    std::vector<std::pair<int, int>> flows;
    for (int beta = 1; beta <= 4; ++beta) {
        for (int b = 0; b <= b_max; ++b) {
            flows.emplace_back(beta, b);
        }
    }
    for (std::size_t i = 0; i < flows.size(); ++i) {
        for (std::size_t j = i; j < flows.size(); ++j) {
            const auto [beta, b] = flows[i];
            const auto [gamma, c] = flows[j];
            for (int alpha = 1; alpha <= 4; ++alpha) {
                const std::string tag = "[t" + std::to_string(beta) + "_" + std::to_string(b) + ", t" + std::to_string(gamma) + "_"
                                        + std::to_string(c) + "] u" + std::to_string(alpha) + "_0";
                out.push_back(check_zero("commutator " + tag, commutator_check(beta, b, gamma, c, alpha, jets)));
            }
        }
    }
    return out;
}

std::vector<CheckResult> miura_suite(const std::vector<int>& genera, const std::vector<int>& alphas, const PotentialTruncation& trunc,
                                     const JetConfig& jets, StationaryEngine& engine)
{
    std::vector<CheckResult> out;
    for (int g : genera) {
        if (g < 1) {
            throw std::invalid_argument("the Miura check needs genus >= 1");
        }
        const auto f = genus_potential(g, trunc, engine);
        for (int alpha : alphas) {
            const auto w = miura_w(alpha, g, jets, engine);
            const auto lhs = evaluate_on_jets(w[static_cast<std::size_t>(g)], trunc);
            const auto rhs = genus_two_point(alpha, f);
            const int d = std::min(lhs.exact_degree(), rhs.exact_degree());
            out.push_back(check_zero("eps^" + std::to_string(2 * g) + " term of w^" + std::to_string(alpha) + " through degree " + std::to_string(d),
                                     truncate_degree(lhs, d) - truncate_degree(rhs, d)));
        }
    }
    return out;
}

std::vector<StationaryProfile> profiles_up_to(int max_points, int max_weight)
{
    std::vector<StationaryProfile> out;
    StationaryProfile cur;
    auto rec = [&](auto&& self, int lowest, int weight) -> void {
        out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_points) {
            return;
        }
        for (int d = lowest; weight + d + 2 <= max_weight; d = (d == -2 ? 0 : d + 1)) {
            cur.push_back(d);
            self(self, d, weight + d + 2);
            cur.pop_back();
        }
    };
    rec(rec, -2, 0);
    return out;
}

std::vector<CheckResult> roundtrip_suite(const std::vector<StationaryProfile>& profiles, int q_order, int max_points)
{
    StationaryEngine connected(max_points);
    StationaryEngine direct(max_points);
    const auto inverse_euler = series_invert(euler_function(q_order));
    std::vector<CheckResult> out;
    for (const auto& p : profiles) {
        QSeries rebuilt = QSeries::constant("q", q_order, Rational(1));
        if (p.empty()) {
            rebuilt = series_exp(connected.connected_series(p, q_order));
        } else {
            QSeries sum("q", q_order, Rational(0));
            for (const auto& sp : set_partitions(static_cast<int>(p.size()))) {
                QSeries prod = QSeries::constant("q", q_order, Rational(1));
                for (const auto& block : sp) {
                    StationaryProfile sub;
                    for (int i : block) {
                        sub.push_back(p[static_cast<std::size_t>(i)]);
                    }
                    prod = prod * connected.connected_series(sub, q_order);
                }
                sum = sum + prod;
            }
            rebuilt = inverse_euler * sum;
        }
        out.push_back(check_equal("round trip " + profile_label(p), rebuilt, direct.disconnected_series(p, q_order)));
    }
    return out;
}

CriterionReport run_criterion(int id)
{
    const auto start = std::chrono::steady_clock::now();
    CriterionReport r;
    r.id = id;
    switch (id) {
    case 1:
        r.title = "stationary series match the closed quasimodular forms";
        r.checks = criterion_stationary_closed_forms();
        break;
    case 2:
        r.title = "quasimodular decomposition recovers the coefficient maps";
        r.checks = criterion_decomposition();
        break;
    case 3:
        r.title = "empty profile: divisor sums and partition numbers";
        r.checks = criterion_empty_profile();
        break;
    case 4:
        r.title = "tau_{-2} transparency and the d = 0 reduction";
        r.checks = criterion_reductions();
        break;
    case 5:
        r.title = "constraint suite on F_0, F_1, F_2 and v4_d";
        r.checks = criterion_constraints();
        break;
    case 6:
        r.title = "reconstruction closure on stationary variables";
        r.checks = criterion_reconstruction();
        break;
    case 7:
        r.title = "principal hierarchy table and commuting flows";
        r.checks = criterion_hierarchy();
        break;
    case 8:
        r.title = "Miura eps^2 term against the genus-1 two-point function";
        r.checks = criterion_miura();
        break;
    case 9:
        r.title = "connected/disconnected round trip";
        r.checks = criterion_roundtrip();
        break;
    default:
        throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

CriterionReport extended_genus3()
{
    const auto start = std::chrono::steady_clock::now();
    CriterionReport r;
    r.id = 10;
    r.title = "genus 3 spot checks";
    StationaryEngine engine(4);
    for (const auto& lambda : partitions(4)) {
        int weight = 0;
        for (int k : lambda.parts()) {
            weight += k + 2;
        }
        const int q = static_cast<int>(quasimodular_basis(weight).size()) + 3;
        const auto c = engine.connected_series(lambda.parts(), q);
        const auto dec = quasimodular_decompose(c, weight, q);
        r.checks.push_back(check_equal("re-expand decomposition of C_" + profile_label(lambda.parts()), expand(dec.form, q), c));
    }
    const PotentialTruncation trunc{4, 4, 3};
    const auto f = genus_potential(3, trunc, engine);
    r.checks.push_back(check_zero("restrict F_3 to stationary variables", stationary_restriction(f) - stationary_generating_function(3, trunc, engine)));
    r.checks.push_back(check_zero("O F_3", apply_divisor(f)));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace ellgw::app
