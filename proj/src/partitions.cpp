#include "cltlab/partitions.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace cltlab {

namespace {

constexpr int kEnumerationCap = 12; // Bell(12) ~ 4.2e6

bool class_accepts(PartitionClass cls, const Partition& p) {
    switch (cls) {
    case PartitionClass::All: return true;
    case PartitionClass::MinBlockSize2: return p.min_block_size() >= 2;
    case PartitionClass::Pairs: return p.min_block_size() == 2 && p.max_block_size() == 2;
    }
    return false;
}

} // namespace

Partition Partition::from_blocks(int k, std::vector<std::vector<int>> blocks) {
    if (k < 1) throw ArgumentError("Partition: ground set size must be positive");
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    std::size_t covered = 0;
    for (auto& b : blocks) {
        if (b.empty()) throw ArgumentError("Partition: empty block");
        std::sort(b.begin(), b.end());
        for (int e : b) {
            if (e < 1 || e > k) throw ArgumentError("Partition: element " + std::to_string(e) + " outside 1.." + std::to_string(k));
            if (seen[static_cast<std::size_t>(e - 1)]) throw ArgumentError("Partition: element " + std::to_string(e) + " appears twice");
            seen[static_cast<std::size_t>(e - 1)] = true;
            ++covered;
        }
    }
    if (covered != static_cast<std::size_t>(k)) throw ArgumentError("Partition: blocks do not cover 1.." + std::to_string(k));
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return Partition(k, std::move(blocks));
}

Partition Partition::from_rgs(std::span<const int> rgs) {
    if (rgs.empty()) throw ArgumentError("Partition: empty restricted-growth string");
    int maxid = -1;
    std::vector<std::vector<int>> blocks;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
        const int id = rgs[i];
        if (id < 0 || id > maxid + 1) throw ArgumentError("Partition: invalid restricted-growth string");
        if (id == maxid + 1) {
            blocks.emplace_back();
            maxid = id;
        }
        blocks[static_cast<std::size_t>(id)].push_back(static_cast<int>(i) + 1);
    }
    // Block ids in an RGS appear in order of least element, so this is canonical.
    return Partition(static_cast<int>(rgs.size()), std::move(blocks));
}

int Partition::min_block_size() const {
    std::size_t m = std::numeric_limits<std::size_t>::max();
    for (const auto& b : blocks_) m = std::min(m, b.size());
    return static_cast<int>(m);
}

int Partition::max_block_size() const {
    std::size_t m = 0;
    for (const auto& b : blocks_) m = std::max(m, b.size());
    return static_cast<int>(m);
}

int Partition::singleton_count() const {
    int n = 0;
    for (const auto& b : blocks_) n += b.size() == 1 ? 1 : 0;
    return n;
}

std::vector<int> Partition::rgs() const {
    std::vector<int> out(static_cast<std::size_t>(k_), 0);
    for (std::size_t id = 0; id < blocks_.size(); ++id)
        for (int e : blocks_[id]) out[static_cast<std::size_t>(e - 1)] = static_cast<int>(id);
    return out;
}

bool Partition::refines(const Partition& coarser) const {
    if (k_ != coarser.k_) throw ArgumentError("Partition::refines: mismatched ground sets");
    const std::vector<int> target = coarser.rgs();
    for (const auto& b : blocks_) {
        const int id = target[static_cast<std::size_t>(b.front() - 1)];
        for (int e : b)
            if (target[static_cast<std::size_t>(e - 1)] != id) return false;
    }
    return true;
}

void for_each_partition(int k, PartitionClass cls, const std::function<void(const Partition&)>& fn) {
    if (k < 1 || k > kEnumerationCap)
        throw SizeError("enumerate_partitions: k = " + std::to_string(k) + " outside 1.." + std::to_string(kEnumerationCap));
    // Odometer over restricted-growth strings in lexicographic order.
    // pm[i] = max(a[0..i]); a[i] may grow up to pm[i-1] + 1.
    std::vector<int> a(static_cast<std::size_t>(k), 0);
    std::vector<int> pm(static_cast<std::size_t>(k), 0);
    while (true) {
        Partition p = Partition::from_rgs(a);
        if (class_accepts(cls, p)) fn(p);
        int i = k - 1;
        while (i > 0 && a[static_cast<std::size_t>(i)] > pm[static_cast<std::size_t>(i - 1)]) --i;
        if (i == 0) return;
        a[static_cast<std::size_t>(i)] += 1;
        pm[static_cast<std::size_t>(i)] = std::max(pm[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < k; ++j) {
            a[static_cast<std::size_t>(j)] = 0;
            pm[static_cast<std::size_t>(j)] = pm[static_cast<std::size_t>(j - 1)];
        }
    }
}

std::vector<Partition> enumerate_partitions(int k, PartitionClass cls) {
    std::vector<Partition> out;
    for_each_partition(k, cls, [&](const Partition& p) { out.push_back(p); });
    return out;
}

int blocks_meeting(const Partition& pi, std::span<const int> K) {
    if (K.empty()) throw ArgumentError("blocks_meeting: K must be nonempty");
    const int k = pi.ground_size();
    std::vector<int> rgs = pi.rgs();
    std::vector<bool> hit(static_cast<std::size_t>(pi.block_count()), false);
    int count = 0;
    for (int e : K) {
        if (e < 1 || e > k) throw ArgumentError("blocks_meeting: index " + std::to_string(e) + " outside 1.." + std::to_string(k));
        const int id = rgs[static_cast<std::size_t>(e - 1)];
        if (!hit[static_cast<std::size_t>(id)]) {
            hit[static_cast<std::size_t>(id)] = true;
            ++count;
        }
    }
    return count;
}

int separation_weight(const Partition& pi, const Partition& kappa) {
    if (pi.ground_size() != kappa.ground_size())
        throw ArgumentError("separation_weight: partitions of different ground sets");
    int total = 0;
    for (const auto& K : kappa.blocks()) total += blocks_meeting(pi, K) - 1;
    return total;
}

std::uint64_t double_factorial(int k) {
    if (k < -1) throw ArgumentError("double_factorial: negative argument");
    if (k > 33) throw SizeError("double_factorial: k > 33 overflows 64 bits");
    std::uint64_t r = 1;
    for (int v = k; v > 1; v -= 2) r *= static_cast<std::uint64_t>(v);
    return r;
}

std::uint64_t bell_number(int k) {
    if (k < 0) throw ArgumentError("bell_number: negative argument");
    if (k > 25) throw SizeError("bell_number: k > 25 overflows 64 bits");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= k; ++i) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1);
        next[0] = row.back();
        for (std::size_t j = 0; j + 1 < next.size(); ++j) next[j + 1] = next[j] + row[j];
        row = std::move(next);
    }
    return row.front();
}

} // namespace cltlab
