#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "cltlab/errors.hpp"

namespace cltlab {

/// Which subset of the partition lattice to enumerate.
enum class PartitionClass {
    All,           ///< every set partition of {1..k}
    MinBlockSize2, ///< partitions whose blocks all have size >= 2
    Pairs,         ///< pair partitions (every block has size exactly 2)
};

/// A set partition of {1..k}. Canonical form: elements ascending inside each
/// block, blocks ordered by their least element. Value type, compared
/// structurally.
class Partition {
public:
    /// Empty partition (ground size 0); a placeholder until assigned.
    Partition() = default;

    /// Builds from arbitrary blocks; validates disjointness/coverage and
    /// canonicalizes the ordering.
    static Partition from_blocks(int k, std::vector<std::vector<int>> blocks);

    /// Builds from a restricted-growth string: rgs[i] is the 0-based block id
    /// of element i+1, with rgs[0] == 0 and rgs[i] <= 1 + max(rgs[0..i-1]).
    static Partition from_rgs(std::span<const int> rgs);

    int ground_size() const { return k_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    const std::vector<int>& block(int i) const { return blocks_[static_cast<std::size_t>(i)]; }

    int min_block_size() const;
    int max_block_size() const;
    int singleton_count() const;

    /// Restricted-growth string of the canonical form.
    std::vector<int> rgs() const;

    /// True when every block of *this lies inside a single block of coarser.
    bool refines(const Partition& coarser) const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    Partition(int k, std::vector<std::vector<int>> blocks)
        : k_(k), blocks_(std::move(blocks)) {}

    int k_ = 0;
    std::vector<std::vector<int>> blocks_; // canonical
};

/// All partitions of {1..k} in the requested class, in lexicographic order of
/// their restricted-growth strings. Hard cap k <= 12.
std::vector<Partition> enumerate_partitions(int k, PartitionClass cls);

/// Calls fn(partition) for each partition instead of materializing the list.
void for_each_partition(int k, PartitionClass cls, const std::function<void(const Partition&)>& fn);

/// Kernel of a tuple: i and j share a block iff tuple[i] == tuple[j].
template <class T>
Partition kernel_partition(std::span<const T> tuple) {
    if (tuple.empty()) throw SizeError("kernel_partition: tuple must be nonempty");
    std::map<T, std::vector<int>> groups;
    for (std::size_t i = 0; i < tuple.size(); ++i)
        groups[tuple[i]].push_back(static_cast<int>(i) + 1);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(groups.size());
    for (auto& [value, members] : groups) blocks.push_back(std::move(members));
    return Partition::from_blocks(static_cast<int>(tuple.size()), std::move(blocks));
}

template <class T>
Partition kernel_partition(const std::vector<T>& tuple) {
    return kernel_partition(std::span<const T>(tuple));
}

/// Number of blocks of pi that intersect the index set K (1-based, nonempty).
int blocks_meeting(const Partition& pi, std::span<const int> K);

/// sum over K in kappa of (blocks_meeting(pi, K) - 1). Zero exactly when kappa
/// refines pi.
int separation_weight(const Partition& pi, const Partition& kappa);

/// k!! with (-1)!! = 0!! = 1. Cap k <= 33 (largest value fitting 64 bits).
std::uint64_t double_factorial(int k);

/// Bell number |P(k)|, exact; cap k <= 25 (fits 64 bits).
std::uint64_t bell_number(int k);

} // namespace cltlab
