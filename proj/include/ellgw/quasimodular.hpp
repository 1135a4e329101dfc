#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ellgw/series.hpp"

namespace ellgw {

/// E_k = zeta(1-k)/2 + sum_n sigma_{k-1}(n) q^n for k in {2, 4, 6}.
QSeries eisenstein(int k, int q_order);

/// Exponents (a, b, c) of E2^a E4^b E6^c.
using EisensteinMonomial = std::array<int, 3>;

/// Monomials of weight w (2a + 4b + 6c = w), ordered by decreasing a, then
/// decreasing b.
std::vector<EisensteinMonomial> quasimodular_basis(int weight);

/// "E2^2", "E2*E4", "E6", ... ("1" for weight 0).
std::string monomial_name(const EisensteinMonomial& m);

struct QuasimodularForm {
    int weight = 0;
    std::map<EisensteinMonomial, Rational> coefficients;

    friend bool operator==(const QuasimodularForm&, const QuasimodularForm&) = default;
};

QSeries expand(const QuasimodularForm& f, int q_order);

struct QuasimodularDecomposition {
    QuasimodularForm form;
    /// Equations beyond the dimension of the weight space that were checked.
    int surplus = 0;
};

/// The unique element of Q[E2,E4,E6]_w whose expansion matches s through
/// q^q_order. Requires q_order >= dim + 3. Throws InconsistencyError when no
/// combination matches, TruncationError when the system is underdetermined.
QuasimodularDecomposition quasimodular_decompose(const QSeries& s, int weight, int q_order);

} // namespace ellgw
