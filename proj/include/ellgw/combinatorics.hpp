#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ellgw/rational.hpp"

namespace ellgw {

/// Integer partition with parts in weakly decreasing order.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int weight() const;
    int length() const { return static_cast<int>(parts_.size()); }
    /// m_j: how many parts equal j.
    int multiplicity(int j) const;
    std::map<int, int> multiplicities() const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
};

/// All partitions of d, in reverse lexicographic order of the part sequence:
/// (d), (d-1,1), (d-2,2), (d-2,1,1), ... partitions(0) = {()}.
std::vector<Partition> partitions(int d);

/// prod_j m_j(lambda)!
Integer automorphism_factor(const Partition& lambda);

/// Set partition of {0..n-1}; blocks are sorted by their smallest element and
/// each block is sorted ascending.
using SetPartition = std::vector<std::vector<int>>;

/// Every set partition of {0..n-1} exactly once, generated by restricted
/// growth strings in lexicographic order (the first one is a single block).
std::vector<SetPartition> set_partitions(int n);

/// Rising factorial (a)_b.
Rational pochhammer(const Rational& a, int b);

/// sum_{d | n} d^k.
Integer divisor_power_sum(std::uint64_t n, unsigned k);

} // namespace ellgw
