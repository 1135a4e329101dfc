#pragma once

// Stationary invariants of an elliptic curve from the theta-function
// determinant formula for the disconnected n-point function.

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "ellgw/multiseries.hpp"
#include "ellgw/series.hpp"

namespace ellgw {

/// theta(z) = sum_{n>=0} (-1)^n q^{n(n+1)/2} (e^{(n+1/2)z} - e^{-(n+1/2)z}),
/// held as a z-series with q-series coefficients, and its factorization
/// theta(z) = z * unit(z).
struct ThetaExpansion {
    Series<QSeries> theta;
    Series<QSeries> unit;

    int z_order() const { return theta.order(); }
    int q_order() const { return theta[0].order(); }
};

/// Coefficient of z^m in theta(z) (a q-series; zero for even m).
QSeries theta_coefficient(int m, int q_order);

ThetaExpansion theta_expansion(int z_order, int q_order);

/// d^k theta / dz^k as a z-series of order z_order.
Series<QSeries> theta_derivative(int k, int z_order, int q_order);

/// Insertion profile (d_1..d_n); entries are -2 or non-negative.
using StationaryProfile = std::vector<int>;

void validate_profile(const StationaryProfile& profile);

/// A multivariate series in z_1..z_n divided by a product of partial-sum
/// linear forms. The numerator is a homogeneous component; the denominator is
/// a multiset of subset masks.
class ZFraction {
public:
    ZFraction(MultiSeries<QSeries> numerator, std::map<SubsetMask, int> denominator);

    const MultiSeries<QSeries>& numerator() const { return numerator_; }
    const std::map<SubsetMask, int>& denominator() const { return denominator_; }
    int nvars() const { return numerator_.nvars(); }

    /// Same value written over a denominator that contains this one.
    ZFraction with_denominator(const std::map<SubsetMask, int>& target) const;

    /// Substitute z_i -> z_{perm[i]}.
    ZFraction permuted(std::span<const int> perm) const;

    /// Divide out the denominator. Multi-element forms are divided exactly
    /// (a nonzero remainder throws InconsistencyError); singleton forms z_i
    /// lower exponents, so the result may be a Laurent polynomial.
    MultiSeries<QSeries> finalize() const;

    friend ZFraction operator+(const ZFraction& a, const ZFraction& b);

private:
    MultiSeries<QSeries> numerator_;
    std::map<SubsetMask, int> denominator_;
};

/// Computes and memoizes the n-point functions and the connected series
/// C_{d}(q). Safe to share between threads; results do not depend on the
/// order in which requests arrive.
class StationaryEngine {
public:
    explicit StationaryEngine(int max_points = 3);

    int max_points() const { return max_points_; }

    /// Homogeneous component of total z-degree `degree` of the disconnected
    /// n-point function F_E(z_1..z_n), including the 1/(q)_infinity factor.
    MultiSeries<QSeries> npoint_component(int n, int degree, int q_order);

    /// F_E(z_1..z_n) through total z-degree z_order (every component from -n up).
    MultiSeries<QSeries> npoint_function(int n, int z_order, int q_order);

    /// sum_d <prod tau_{d_i}(pt)>^{bullet}_d q^d.
    QSeries disconnected_series(const StationaryProfile& profile, int q_order);

    /// <prod tau_{d_i}(pt)>^{bullet}_d.
    Rational disconnected_invariant(const StationaryProfile& profile, int degree);

    /// C_{d}(q) through q^q_order, by inverting the connected/disconnected
    /// relation over set partitions. Memoized on the sorted profile.
    QSeries connected_series(const StationaryProfile& profile, int q_order);

    /// C_{d}(q) for a profile of non-negative entries; optionally verifies that it
    /// decomposes as a quasimodular form of weight sum(d_i + 2).
    QSeries stationary_series(const StationaryProfile& profile, int q_order, bool cross_validate = false);

private:
    MultiSeries<QSeries> compute_component(int n, int degree, int q_order) const;
    void check_points(int n);

    int max_points_;
    mutable std::recursive_mutex mutex_;
    std::map<std::pair<int, int>, MultiSeries<QSeries>> components_;  // (n, degree) -> largest q-order seen
    std::map<StationaryProfile, QSeries> connected_;                  // sorted profile -> largest q-order seen
    bool warned_ = false;
};

} // namespace ellgw
