#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cltlab/partitions.hpp"
#include "oracles.hpp"

using namespace cltlab;

namespace {

Partition parts(int k, std::vector<std::vector<int>> blocks) {
    return Partition::from_blocks(k, std::move(blocks));
}

std::set<std::vector<std::vector<int>>> as_block_sets(const std::vector<Partition>& list) {
    std::set<std::vector<std::vector<int>>> out;
    for (const auto& p : list) out.insert(p.blocks());
    return out;
}

} // namespace

TEST_SUITE("partitions") {

TEST_CASE("enumeration matches the recursive oracle on counts and contents") {
    for (int k = 1; k <= 8; ++k) {
        const auto mine = enumerate_partitions(k, PartitionClass::All);
        const auto oracle = oracles::all_partitions(k);
        REQUIRE(mine.size() == oracle.size());
        std::set<std::vector<std::vector<int>>> oracle_set;
        for (const auto& p : oracle) {
            std::vector<std::vector<int>> blocks;
            for (const auto& b : p) blocks.emplace_back(b.begin(), b.end());
            std::sort(blocks.begin(), blocks.end(),
                      [](const auto& a, const auto& b) { return a.front() < b.front(); });
            oracle_set.insert(blocks);
        }
        CHECK(as_block_sets(mine) == oracle_set);
    }
    CHECK(enumerate_partitions(1, PartitionClass::All).size() == 1);
    CHECK(enumerate_partitions(4, PartitionClass::All).size() == 15);
}

TEST_CASE("enumeration is deterministic, duplicate-free and lexicographic in growth strings") {
    const auto list = enumerate_partitions(5, PartitionClass::All);
    std::set<std::vector<int>> seen;
    std::vector<int> prev;
    for (const auto& p : list) {
        const auto rgs = p.rgs();
        CHECK(seen.insert(rgs).second);
        if (!prev.empty()) CHECK(prev < rgs);
        prev = rgs;
    }
}

TEST_CASE("pair partitions: (k-1)!! for even k, none for odd k") {
    for (int k = 2; k <= 8; k += 2)
        CHECK(enumerate_partitions(k, PartitionClass::Pairs).size() == double_factorial(k - 1));
    for (int k = 1; k <= 11; k += 2)
        CHECK(enumerate_partitions(k, PartitionClass::Pairs).empty());
    CHECK(enumerate_partitions(6, PartitionClass::Pairs).size() == 15);
}

TEST_CASE("min-block-size-2 class sits between pairs and all") {
    for (int k = 2; k <= 7; ++k) {
        const auto pairs = as_block_sets(enumerate_partitions(k, PartitionClass::Pairs));
        const auto big = as_block_sets(enumerate_partitions(k, PartitionClass::MinBlockSize2));
        const auto all = as_block_sets(enumerate_partitions(k, PartitionClass::All));
        CHECK(std::includes(big.begin(), big.end(), pairs.begin(), pairs.end()));
        CHECK(std::includes(all.begin(), all.end(), big.begin(), big.end()));
    }
}

TEST_CASE("enumeration cap") {
    CHECK_THROWS_AS(enumerate_partitions(13, PartitionClass::All), SizeError);
    CHECK_THROWS_AS(enumerate_partitions(0, PartitionClass::All), SizeError);
}

TEST_CASE("kernel partition by equality of entries") {
    CHECK(kernel_partition(std::vector<int>{5, 3, 5, 7}) == parts(4, {{1, 3}, {2}, {4}}));
    CHECK(kernel_partition(std::vector<char>{'a', 'a', 'a'}) == parts(3, {{1, 2, 3}}));
    CHECK(kernel_partition(std::vector<int>{1, 2, 3, 4}) == parts(4, {{1}, {2}, {3}, {4}}));
    CHECK_THROWS_AS(kernel_partition(std::vector<int>{}), SizeError);
}

TEST_CASE("kernel partition is invariant under injective relabeling") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 7);
        std::vector<int> tuple(static_cast<std::size_t>(k));
        for (auto& v : tuple) v = static_cast<int>(rng() % 4);
        // any strictly monotone map is injective
        std::vector<int> relabeled(tuple.size());
        std::transform(tuple.begin(), tuple.end(), relabeled.begin(),
                       [](int v) { return 100 - 7 * v; });
        CHECK(kernel_partition(tuple) == kernel_partition(relabeled));
    }
}

TEST_CASE("blocks_meeting") {
    const Partition pi = parts(6, {{1, 2}, {3, 4}, {5, 6}});
    CHECK(blocks_meeting(pi, std::vector<int>{1, 2, 3, 4}) == 2);
    CHECK(blocks_meeting(parts(3, {{1}, {2}, {3}}), std::vector<int>{1, 2, 3}) == 3);
    CHECK(blocks_meeting(parts(3, {{1, 2, 3}}), std::vector<int>{2}) == 1);
    CHECK_THROWS_AS(blocks_meeting(pi, std::vector<int>{}), ArgumentError);
    CHECK_THROWS_AS(blocks_meeting(pi, std::vector<int>{7}), ArgumentError);
}

TEST_CASE("separation weight worked examples") {
    CHECK(separation_weight(parts(6, {{1, 2}, {3, 4}, {5, 6}}),
                            parts(6, {{1, 2, 3, 4}, {5, 6}})) == 1);
    CHECK(separation_weight(parts(6, {{1}, {2}, {3}, {4}, {5, 6}}),
                            parts(6, {{1, 2}, {3, 4}, {5, 6}})) == 2);
    CHECK(separation_weight(parts(6, {{1}, {2}, {3}, {4}, {5, 6}}),
                            parts(6, {{1, 2, 3, 4}, {5, 6}})) == 3);
    CHECK_THROWS_AS(separation_weight(parts(2, {{1, 2}}), parts(3, {{1, 2, 3}})), ArgumentError);
}

TEST_CASE("separation weight vanishes exactly on refinements") {
    for (int k = 2; k <= 6; ++k) {
        const auto all = enumerate_partitions(k, PartitionClass::All);
        for (const auto& pi : all)
            for (const auto& kappa : all)
                CHECK((separation_weight(pi, kappa) == 0) == kappa.refines(pi));
    }
}

TEST_CASE("non-refining kernels always cost at least one separation factor") {
    for (int k = 2; k <= 6; ++k) {
        const auto all = enumerate_partitions(k, PartitionClass::All);
        const auto kernels = enumerate_partitions(k, PartitionClass::MinBlockSize2);
        for (const auto& pi : all)
            for (const auto& kappa : kernels)
                if (!kappa.refines(pi)) CHECK(separation_weight(pi, kappa) >= 1);
    }
}

TEST_CASE("singleton-heavy partitions force weight >= ceil(singletons / 2)") {
    for (int k = 2; k <= 6; ++k) {
        const auto all = enumerate_partitions(k, PartitionClass::All);
        const auto kernels = enumerate_partitions(k, PartitionClass::MinBlockSize2);
        for (const auto& pi : all) {
            const int singles = pi.singleton_count();
            for (const auto& kappa : kernels)
                CHECK(separation_weight(pi, kappa) >= (singles + 1) / 2);
        }
    }
}

TEST_CASE("double factorial") {
    CHECK(double_factorial(5) == 15);
    CHECK(double_factorial(0) == 1);
    CHECK(double_factorial(-1) == 1);
    CHECK(double_factorial(7) == 105);
    CHECK(double_factorial(33) == 6332659870762850625ull);
    CHECK_THROWS_AS(double_factorial(34), SizeError);
    CHECK_THROWS_AS(double_factorial(-2), ArgumentError);
}

TEST_CASE("bell numbers") {
    CHECK(bell_number(0) == 1);
    CHECK(bell_number(1) == 1);
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(8) == 4140);
    CHECK(bell_number(12) == 4213597);
    CHECK_THROWS_AS(bell_number(26), SizeError);
}

TEST_CASE("canonical form validation") {
    CHECK_THROWS_AS(parts(3, {{1, 2}}), ArgumentError);          // not covering
    CHECK_THROWS_AS(parts(3, {{1, 2}, {2, 3}}), ArgumentError);  // overlap
    CHECK_THROWS_AS(parts(3, {{1, 2, 3}, {}}), ArgumentError);   // empty block
    CHECK_THROWS_AS(parts(3, {{1, 2, 4}}), ArgumentError);       // out of range
    const Partition p = parts(5, {{4, 2}, {5, 1, 3}});
    CHECK(p.blocks() == std::vector<std::vector<int>>{{1, 3, 5}, {2, 4}});
    CHECK(p.rgs() == std::vector<int>{0, 1, 0, 1, 0});
    CHECK(Partition::from_rgs(p.rgs()) == p);
}

} // TEST_SUITE
