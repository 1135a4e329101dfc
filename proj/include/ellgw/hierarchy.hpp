#pragma once

// The principal hierarchy of the elliptic curve on a jet ring, and the
// Miura transformation to the full-genus variables w^alpha.
//
// Jet variables u^alpha_k stand for d^k v^alpha / dx^k and reuse TVariable
// with `level` as the jet order. Coefficients are q-series, where q is read
// as the dressed variable q e^{u^4_0}: the partial derivative in u^4_0 also
// acts on coefficients by q d/dq.

#include <vector>

#include "ellgw/potential.hpp"

namespace ellgw {

using JetVariable = TVariable;
using DiffPoly = SuperPolynomial<QSeries>;

inline JetVariable jet(int alpha, int order)
{
    return tvar(alpha, order);
}

struct JetConfig {
    int jet_order = 6;
    int q_order = 6;
};

DiffPoly diff_constant(const JetConfig& cfg, const Rational& c);
DiffPoly diff_variable(const JetConfig& cfg, JetVariable u);

/// P^alpha_{beta,b} from the closed-form table.
DiffPoly principal_p(int alpha, int beta, int b, const JetConfig& cfg);

/// d e / d u, including the dressing term when u = u^4_0.
DiffPoly jet_partial(const DiffPoly& e, JetVariable u);

/// sum_{alpha,k} u^alpha_{k+1} de/du^alpha_k. Throws TruncationError when a
/// jet of the top order would have to be differentiated.
DiffPoly total_x_derivative(const DiffPoly& e);

/// d^n e / dx^n.
DiffPoly x_derivative(const DiffPoly& e, int n);

/// Derivative of e along the flow d/dt^beta_b, i.e. the derivation sending
/// u^alpha_k to d^{k+1}P^alpha_{beta,b}/dx^{k+1}.
DiffPoly flow_apply(int beta, int b, const DiffPoly& e);

/// [d/dt^beta_b, d/dt^gamma_c] applied to u^alpha_0, graded by the parities
/// of beta and gamma.
DiffPoly commutator_check(int beta, int b, int gamma, int c, int alpha, const JetConfig& cfg);

/// The genus-g jet expression sum_lambda prod u^4_{lambda_i}/prod m_j! C_lambda - delta_{g,1} u^4_0/24.
DiffPoly genus_jet_potential(int genus, const JetConfig& cfg, StationaryEngine& engine);

/// Coefficients of eps^{2g}, g = 0..max_genus, in w^alpha.
std::vector<DiffPoly> miura_w(int alpha, int max_genus, const JetConfig& cfg, StationaryEngine& engine);

/// Substitute u^alpha_k -> d^k v^alpha/(dt^1_0)^k and f(q) -> f(q e^{v^4}).
DescendantPolynomial evaluate_on_jets(const DiffPoly& e, const PotentialTruncation& trunc);

/// d v^alpha / dt^beta_b from F_0 minus d_x P^alpha_{beta,b} evaluated on jets of v.
DescendantPolynomial table_residual(int alpha, int beta, int b, const PotentialTruncation& trunc);

/// eta^{alpha mu} d^2 F_0/dt^beta_b dt^mu_0 minus P^alpha_{beta,b} evaluated on v.
DescendantPolynomial table_value_residual(int alpha, int beta, int b, const PotentialTruncation& trunc);

} // namespace ellgw
