#pragma once

// Genus expansion of the Gromov-Witten potential of an elliptic curve:
// the explicit genus-0 potential, the series v^alpha, the higher-genus
// potentials assembled from stationary data, and the linear constraint
// operators that pin them down.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ellgw/stationary.hpp"
#include "ellgw/supercommutative.hpp"

namespace ellgw {

/// gamma_1 = 1, gamma_2, gamma_3 odd with int gamma_2 gamma_3 = 1, gamma_4 = point class.
struct CohomologyClass {
    int alpha;
    bool odd;
    int twice_half_degree;  // 2 q_alpha
    int virasoro_shift;     // b_alpha
};

const std::array<CohomologyClass, 4>& cohomology_basis();
const CohomologyClass& cohomology_class(int alpha);

/// eta_{ab} = int gamma_a gamma_b and its inverse, 1-based indices.
struct EtaMatrix {
    static int pairing(int a, int b);
    static int inverse(int a, int b);
};

struct PotentialTruncation {
    int max_degree = 5;  // N: total polynomial degree in t
    int max_level = 4;   // D: descendant levels 0..D
    int q_order = 6;     // Q

    Truncation polynomial() const { return {max_degree, max_level}; }
};

using DescendantPolynomial = SuperPolynomial<QSeries>;

struct GenusPotential {
    int genus = 0;
    DescendantPolynomial body;
    PotentialTruncation trunc;
};

/// sum over monomials of (2 k + 2 q_alpha - 2); equals 4g - 4 on F_g.
int dimension_weight(const SuperMonomial& m);

/// F_0 with rational coefficients, exact through total degree max_degree.
SuperPolynomial<Rational> genus0_terms(int max_degree, int max_level);

GenusPotential genus0_potential(const PotentialTruncation& trunc);

/// v^alpha = eta^{alpha mu} d^2 F_0 / dt^mu_0 dt^1_0, exact through degree trunc.max_degree.
SuperPolynomial<Rational> v_series(int alpha, const Truncation& trunc);

/// v^4_k = d^k v^4 / (dt^1_0)^k, exact through degree trunc.max_degree.
SuperPolynomial<Rational> v4_derivative(int k, const Truncation& trunc);

/// C(q) evaluated at q * exp(v4): sum_d c_d q^d exp(v4)^d, with `exp_powers[d]` = exp(v4)^d.
DescendantPolynomial compose_dressed(const QSeries& c, std::span<const SuperPolynomial<Rational>> exp_powers);

/// The same composition through generic series substitution (slow; used as a cross-check).
DescendantPolynomial compose_dressed_generic(const QSeries& c, const SuperPolynomial<Rational>& v4);

/// F_g for g >= 0. For g >= 1 the stationary series come from `engine`.
/// Throws InconsistencyError when a monomial violates the dimension constraint.
GenusPotential genus_potential(int genus, const PotentialTruncation& trunc, StationaryEngine& engine);

enum class OperatorKind { L, D, Dbar, O, Ltilde };

struct ConstraintOperator {
    OperatorKind kind = OperatorKind::Ltilde;
    int level = -1;  // ignored for O
};

ConstraintOperator make_operator(OperatorKind kind, int level = -1);

std::string to_string(const ConstraintOperator& op);

/// The operator applied to p (with L and Ltilde acting identically on a
/// single genus). The result is known exactly on monomials whose levels do
/// not exceed max_level - max(k, 0); other monomials are dropped.
DescendantPolynomial apply_operator(const ConstraintOperator& op, const DescendantPolynomial& p);

/// op F_g minus the right-hand side of the constraint at genus g.
DescendantPolynomial apply_constraint(const ConstraintOperator& op, const GenusPotential& f);

DescendantPolynomial apply_divisor(const GenusPotential& f);

/// op v^4_d minus its expected value (delta_{d,0} for O, zero otherwise).
DescendantPolynomial constraint_on_v4(const ConstraintOperator& op, int d, const PotentialTruncation& trunc);

struct Insertion {
    int level;  // k
    int alpha;
};

/// <prod tau_{k_i}(gamma_{alpha_i})>_{g,d} in the requested insertion order.
/// Throws TruncationError when the insertions or degree lie outside f.trunc.
Rational correlator(const GenusPotential& f, int degree, std::span<const Insertion> insertions);

/// d^2 F_0 / dt^a_i dt^b_j minus the same second derivative restricted to
/// t_{>=1} = 0 with t^gamma_0 replaced by v^gamma.
SuperPolynomial<Rational> two_point_residual(TVariable first, TVariable second, const Truncation& trunc);

/// eta^{alpha mu} d^2 F_g / dt^mu_0 dt^1_0.
DescendantPolynomial genus_two_point(int alpha, const GenusPotential& f);

/// F_g restricted to t^1 = t^2 = t^3 = t^4_0 = 0.
DescendantPolynomial stationary_restriction(const GenusPotential& f);

/// sum_n 1/n! sum_{k_i >= 1, sum k_i = 2g-2} C_{(k)}(q) prod t^4_{k_i}, built
/// directly from the connected stationary series.
DescendantPolynomial stationary_generating_function(int genus, const PotentialTruncation& trunc, StationaryEngine& engine);

} // namespace ellgw
