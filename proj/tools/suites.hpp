#pragma once

// Verification suites shared by the CLI and the acceptance runner. Each check
// compares two exactly computed objects; a check passes only on identity.

#include <optional>
#include <string>
#include <vector>

#include "document.hpp"
#include "ellgw/hierarchy.hpp"

namespace ellgw::app {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string offending;  // first offending term, empty on pass
    Json residual;          // residual polynomial or series on failure, null on pass
};

Json checks_to_json(const std::vector<CheckResult>& checks);
bool all_pass(const std::vector<CheckResult>& checks);

CheckResult check_zero(std::string name, const DescendantPolynomial& residual);
CheckResult check_equal(std::string name, const QSeries& lhs, const QSeries& rhs);
CheckResult check_true(std::string name, bool ok, std::string detail = {});

struct VirasoroSelection {
    std::vector<int> genera{0, 1, 2};
    std::vector<int> levels{-1, 0, 1, 2, 3};
    std::vector<OperatorKind> kinds{OperatorKind::Ltilde, OperatorKind::D, OperatorKind::Dbar};
};

/// Residuals of the selected operators on F_g, and their action on v^4_d for d <= max_level.
std::vector<CheckResult> virasoro_suite(const VirasoroSelection& sel, const PotentialTruncation& trunc, StationaryEngine& engine);

/// O F_g plus its constant, for each genus, and O v^4_d = delta_{d,0}.
std::vector<CheckResult> divisor_suite(const std::vector<int>& genera, const PotentialTruncation& trunc, StationaryEngine& engine);

/// Table residuals for all alpha, beta and b <= b_max, and every flow commutator
/// with levels <= b_max applied to each u^alpha_0.
std::vector<CheckResult> hierarchy_suite(int b_max, const PotentialTruncation& trunc, const JetConfig& jets);

/// eps^{2g} term of w^alpha evaluated on jets of v against the two-point
/// function of F_g, for the requested genera and alpha.
std::vector<CheckResult> miura_suite(const std::vector<int>& genera, const std::vector<int>& alphas, const PotentialTruncation& trunc,
                                     const JetConfig& jets, StationaryEngine& engine);

/// Profiles (sorted, entries in {-2} or >= 0) with at most max_points entries and
/// sum (d_i + 2) <= max_weight.
std::vector<StationaryProfile> profiles_up_to(int max_points, int max_weight);

/// Rebuild the disconnected series from connected ones over set partitions and
/// compare with the disconnected series of an independent engine.
std::vector<CheckResult> roundtrip_suite(const std::vector<StationaryProfile>& profiles, int q_order, int max_points);

struct CriterionReport {
    int id = 0;
    std::string title;
    std::vector<CheckResult> checks;
    double seconds = 0;

    bool pass() const { return all_pass(checks); }
};

inline constexpr int kCriterionCount = 9;

/// One acceptance criterion (1..kCriterionCount) at pinned truncations.
CriterionReport run_criterion(int id);

/// Genus-3 spot checks requiring the four-point function.
CriterionReport extended_genus3();

} // namespace ellgw::app
