#include "ellgw/quasimodular.hpp"

#include "ellgw/combinatorics.hpp"

namespace ellgw {

QSeries eisenstein(int k, int q_order)
{
    Rational c0;
    switch (k) {
    case 2: c0 = Rational(-1, 24); break;
    case 4: c0 = Rational(1, 240); break;
    case 6: c0 = Rational(-1, 504); break;
    default: throw std::invalid_argument("eisenstein: weight must be 2, 4 or 6");
    }
    std::vector<Rational> c(static_cast<std::size_t>(q_order) + 1);
    c[0] = c0;
    for (int n = 1; n <= q_order; ++n) {
        c[static_cast<std::size_t>(n)] = Rational(divisor_power_sum(static_cast<std::uint64_t>(n), static_cast<unsigned>(k - 1)));
    }
    return QSeries("q", std::move(c));
}

std::vector<EisensteinMonomial> quasimodular_basis(int weight)
{
    std::vector<EisensteinMonomial> basis;
    if (weight < 0 || weight % 2 != 0) {
        return basis;
    }
    for (int a = weight / 2; a >= 0; --a) {
        for (int b = (weight - 2 * a) / 4; b >= 0; --b) {
            const int rest = weight - 2 * a - 4 * b;
            if (rest % 6 == 0) {
                basis.push_back({a, b, rest / 6});
            }
        }
    }
    return basis;
}

std::string monomial_name(const EisensteinMonomial& m)
{
    static const char* names[] = {"E2", "E4", "E6"};
    std::string s;
    for (std::size_t i = 0; i < 3; ++i) {
        if (m[i] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += '*';
        }
        s += names[i];
        if (m[i] > 1) {
            s += '^' + std::to_string(m[i]);
        }
    }
    return s.empty() ? "1" : s;
}

namespace {

QSeries power(const QSeries& x, int e, int q_order)
{
    QSeries r = QSeries::constant("q", q_order, Rational(1));
    for (int i = 0; i < e; ++i) {
        r = r * x;
    }
    return r;
}

QSeries expand_monomial(const EisensteinMonomial& m, int q_order)
{
    return power(eisenstein(2, q_order), m[0], q_order) * power(eisenstein(4, q_order), m[1], q_order)
           * power(eisenstein(6, q_order), m[2], q_order);
}

} // namespace

QSeries expand(const QuasimodularForm& f, int q_order)
{
    QSeries r("q", q_order, Rational(0));
    for (const auto& [m, c] : f.coefficients) {
        if (2 * m[0] + 4 * m[1] + 6 * m[2] != f.weight) {
            throw std::invalid_argument("expand: monomial " + monomial_name(m) + " has the wrong weight");
        }
        r = r + expand_monomial(m, q_order) * c;
    }
    return r;
}

QuasimodularDecomposition quasimodular_decompose(const QSeries& s, int weight, int q_order)
{
    if (weight < 0 || weight % 2 != 0) {
        throw std::invalid_argument("quasimodular weight must be even and non-negative");
    }
    if (s.order() < q_order) {
        throw TruncationError("series shorter than the requested q-order");
    }
    const auto basis = quasimodular_basis(weight);
    const int dim = static_cast<int>(basis.size());
    if (q_order < dim + 3) {
        throw TruncationError("q-order " + std::to_string(q_order) + " too small for weight " + std::to_string(weight)
                              + " (need at least " + std::to_string(dim + 3) + ")");
    }

    // Rows are q-coefficients, columns the basis plus the right-hand side.
    const int rows = q_order + 1;
    std::vector<std::vector<Rational>> a(static_cast<std::size_t>(rows), std::vector<Rational>(static_cast<std::size_t>(dim) + 1));
    for (int j = 0; j < dim; ++j) {
        const auto e = expand_monomial(basis[static_cast<std::size_t>(j)], q_order);
        for (int i = 0; i < rows; ++i) {
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e[i];
        }
    }
    for (int i = 0; i < rows; ++i) {
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim)] = s[i];
    }

    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < dim && r < rows; ++c) {
        int p = r;
        while (p < rows && sgn(a[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)]) == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[static_cast<std::size_t>(p)], a[static_cast<std::size_t>(r)]);
        auto& pr = a[static_cast<std::size_t>(r)];
        const Rational inv = 1 / pr[static_cast<std::size_t>(c)];
        for (auto& x : pr) {
            x *= inv;
        }
        for (int i = 0; i < rows; ++i) {
            if (i == r) {
                continue;
            }
            auto& row = a[static_cast<std::size_t>(i)];
            const Rational f = row[static_cast<std::size_t>(c)];
            if (sgn(f) == 0) {
                continue;
            }
            for (int k = 0; k <= dim; ++k) {
                row[static_cast<std::size_t>(k)] -= f * pr[static_cast<std::size_t>(k)];
            }
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i) {
        if (sgn(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim)]) != 0) {
            throw InconsistencyError("series is not quasimodular of weight " + std::to_string(weight) + " to q^"
                                     + std::to_string(q_order));
        }
    }
    if (r < dim) {
        throw TruncationError("quasimodular system is underdetermined");
    }

    QuasimodularDecomposition dec;
    dec.form.weight = weight;
    dec.surplus = rows - dim;
    for (int i = 0; i < r; ++i) {
        const Rational& v = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim)];
        if (sgn(v) != 0) {
            dec.form.coefficients[basis[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])]] = v;
        }
    }
    return dec;
}

} // namespace ellgw
