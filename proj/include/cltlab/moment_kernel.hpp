#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cltlab/errors.hpp"
#include "cltlab/lattice.hpp"
#include "cltlab/partitions.hpp"

namespace cltlab {

/// Per-kernel-partition contribution to a mixed moment.
template <class Scalar>
struct KernelBreakdownRow {
    Partition kernel;
    Scalar contribution;
    std::int64_t assignments = 0;
};

template <class Scalar>
struct KernelMomentResult {
    Scalar value{};
    std::int64_t assignments = 0;
    std::vector<KernelBreakdownRow<Scalar>> breakdown;
};

/// Mixed moment E X_{t_1} ... X_{t_k} of the filtered field X_t =
/// sum_s c_s Y_{t-s} with independent centered innovations sharing the signed
/// moments E Y^m = moment(m).
///
/// The sum runs over kernel partitions kappa with all blocks of size >= 2
/// (partitions with a singleton block vanish because the innovations are
/// centered). For a fixed kappa the innovation-index tuples with kernel
/// exactly kappa are the injective assignments of one lattice value per
/// block, each value drawn from the intersection of the supports shifted by
/// the block's tuple entries:
///
///   contribution(kappa) = sum over injective (s^K)_K of
///       prod_K [ E Y^{|K|} * prod_{i in K} c_{t_i - s^K} ].
///
/// Blocks are processed in canonical order and candidate values in sorted
/// order, so the floating-point accumulation order is reproducible.
template <class Scalar, class MomentFn>
KernelMomentResult<Scalar> mixed_moment_over_kernels(
    int dim, std::span<const std::pair<LatticePoint, Scalar>> support, MomentFn&& moment,
    std::span<const LatticePoint> tuple, std::int64_t assignment_cap = 10'000'000) {
    (void)dim;
    const int k = static_cast<int>(tuple.size());
    if (k < 1) throw SizeError("mixed_moment: empty tuple");
    if (k > 8) throw SizeError("mixed_moment: k > 8");
    if (support.empty()) throw ArgumentError("mixed_moment: empty support");

    std::unordered_map<LatticePoint, Scalar, LatticePointHash> lookup;
    lookup.reserve(support.size() * 2);
    for (const auto& [s, c] : support) lookup.emplace(s, c);

    KernelMomentResult<Scalar> result;
    result.value = Scalar(0);

    for_each_partition(k, PartitionClass::MinBlockSize2, [&](const Partition& kappa) {
        const int nblocks = kappa.block_count();

        Scalar block_moment_product(1);
        for (int b = 0; b < nblocks; ++b)
            block_moment_product =
                block_moment_product * moment(static_cast<int>(kappa.block(b).size()));

        KernelBreakdownRow<Scalar> row{kappa, Scalar(0), 0};
        if (!(block_moment_product == Scalar(0))) {
            // Candidate values and weights per block: s must satisfy
            // t_i - s in support for every i in the block.
            std::vector<std::vector<std::pair<LatticePoint, Scalar>>> candidates(
                static_cast<std::size_t>(nblocks));
            double combinations = 1.0;
            for (int b = 0; b < nblocks; ++b) {
                const auto& block = kappa.block(b);
                auto& cand = candidates[static_cast<std::size_t>(b)];
                const LatticePoint& t0 = tuple[static_cast<std::size_t>(block.front() - 1)];
                for (const auto& [s0, c0] : support) {
                    const LatticePoint value = t0 - s0; // candidate innovation index
                    Scalar weight = c0;
                    bool alive = true;
                    for (std::size_t m = 1; m < block.size(); ++m) {
                        const auto it = lookup.find(tuple[static_cast<std::size_t>(block[m] - 1)] - value);
                        if (it == lookup.end()) {
                            alive = false;
                            break;
                        }
                        weight = weight * it->second;
                    }
                    if (alive) cand.emplace_back(value, weight);
                }
                combinations *= static_cast<double>(cand.size());
            }
            if (combinations > static_cast<double>(assignment_cap))
                throw SizeError("mixed_moment: more than " + std::to_string(assignment_cap) +
                                " candidate assignments for one kernel partition");
            // Depth-first walk over blocks; values must stay pairwise distinct.
            std::vector<LatticePoint> chosen(static_cast<std::size_t>(nblocks));
            std::vector<Scalar> partial(static_cast<std::size_t>(nblocks) + 1, Scalar(1));
            std::vector<std::size_t> cursor(static_cast<std::size_t>(nblocks), 0);
            int depth = 0;
            while (depth >= 0) {
                if (depth == nblocks) {
                    row.contribution = row.contribution + partial[static_cast<std::size_t>(depth)];
                    row.assignments += 1;
                    --depth;
                    continue;
                }
                auto& cur = cursor[static_cast<std::size_t>(depth)];
                const auto& cand = candidates[static_cast<std::size_t>(depth)];
                bool advanced = false;
                while (cur < cand.size()) {
                    const auto& [value, weight] = cand[cur];
                    ++cur;
                    bool reused = false;
                    for (int d = 0; d < depth; ++d)
                        if (chosen[static_cast<std::size_t>(d)] == value) {
                            reused = true;
                            break;
                        }
                    if (reused) continue;
                    chosen[static_cast<std::size_t>(depth)] = value;
                    partial[static_cast<std::size_t>(depth) + 1] =
                        partial[static_cast<std::size_t>(depth)] * weight;
                    ++depth;
                    if (depth < nblocks) cursor[static_cast<std::size_t>(depth)] = 0;
                    advanced = true;
                    break;
                }
                if (!advanced) {
                    cur = 0;
                    --depth;
                }
            }
            row.contribution = row.contribution * block_moment_product;
        }

        result.value = result.value + row.contribution;
        result.assignments += row.assignments;
        result.breakdown.push_back(std::move(row));
    });

    return result;
}

} // namespace cltlab
