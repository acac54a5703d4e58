#include "cltlab/index_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "cltlab/errors.hpp"

namespace cltlab {

namespace {

constexpr long long kBoxPointCap = 1'000'000;
constexpr long long kTupleIterationCap = 100'000'000;
constexpr long long kCountingIterationCap = 10'000'000;

// Disjoint-set forest over tuple positions.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int v) {
        while (parent_[static_cast<std::size_t>(v)] != v) {
            parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
            v = parent_[static_cast<std::size_t>(v)];
        }
        return v;
    }
    void merge(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

private:
    std::vector<int> parent_;
};

Partition partition_from_components(UnionFind& uf, int k) {
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < k; ++i) groups[uf.find(i)].push_back(i + 1);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(groups.size());
    for (auto& [root, members] : groups) blocks.push_back(std::move(members));
    return Partition::from_blocks(k, std::move(blocks));
}

long long ipow_capped(long long base, int exp, long long cap) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

} // namespace

Box::Box(int dim, int side_param, bool centered)
    : dim_(dim), n_(side_param), centered_(centered) {
    if (dim < 1 || dim > kMaxDim) throw ArgumentError("Box: dim must lie in 1.." + std::to_string(kMaxDim));
    if (side_param < 1) throw ArgumentError("Box: side parameter must be positive");
    lo_ = centered ? -n_ : 1;
    hi_ = n_;
    const long long side = side_length();
    long long size = 1;
    for (int i = 0; i < dim_; ++i) {
        if (size > kBoxPointCap / side + 1) {
            size = kBoxPointCap + 1;
            break;
        }
        size *= side;
    }
    size_ = size;
    if (size_ > kBoxPointCap)
        throw SizeError("Box: " + std::to_string(size_) + " points exceed the cap of " + std::to_string(kBoxPointCap));
}

LatticePoint Box::point(long long index) const {
    LatticePoint p;
    const long long side = side_length();
    for (int i = dim_ - 1; i >= 0; --i) {
        p[i] = lo_ + static_cast<int>(index % side);
        index /= side;
    }
    return p;
}

long long Box::index_of(const LatticePoint& p) const {
    if (!contains(p)) return -1;
    const long long side = side_length();
    long long index = 0;
    for (int i = 0; i < dim_; ++i) index = index * side + (p[i] - lo_);
    return index;
}

bool Box::contains(const LatticePoint& p) const {
    for (int i = 0; i < dim_; ++i)
        if (p[i] < lo_ || p[i] > hi_) return false;
    for (int i = dim_; i < kMaxDim; ++i)
        if (p[i] != 0) return false;
    return true;
}

long long Box::ball_size(const LatticePoint& t, int a) const {
    if (!contains(t)) throw ArgumentError("ball_size: point outside the box");
    if (a < 0) throw ArgumentError("ball_size: negative radius");
    long long r = 1;
    for (int i = 0; i < dim_; ++i) {
        const int lo = std::max(lo_, t[i] - a);
        const int hi = std::min(hi_, t[i] + a);
        r *= hi - lo + 1;
    }
    return r;
}

long long Box::max_ball_size(int a) const {
    if (a < 0) throw ArgumentError("max_ball_size: negative radius");
    const long long axis = std::min<long long>(2LL * a + 1, side_length());
    long long r = 1;
    for (int i = 0; i < dim_; ++i) r *= axis;
    return r;
}

ExplicitSpace::ExplicitSpace(std::vector<std::vector<int>> metric) : metric_(std::move(metric)) {
    const std::size_t m = metric_.size();
    if (m == 0) throw ArgumentError("ExplicitSpace: empty point set");
    if (m > 1000) throw SizeError("ExplicitSpace: more than 1000 points");
    diameter_ = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (metric_[i].size() != m) throw ArgumentError("ExplicitSpace: metric matrix must be square");
        for (std::size_t j = 0; j < m; ++j) {
            const int d = metric_[i][j];
            if (d < 0) throw ArgumentError("ExplicitSpace: metric must be N0-valued");
            if (metric_[j][i] != d) throw ArgumentError("ExplicitSpace: metric must be symmetric");
            if ((i == j) != (d == 0)) throw ArgumentError("ExplicitSpace: metric must vanish exactly on the diagonal");
            diameter_ = std::max(diameter_, d);
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < m; ++l)
                if (metric_[i][j] > metric_[i][l] + metric_[l][j])
                    throw ArgumentError("ExplicitSpace: triangle inequality violated");
}

long long ExplicitSpace::ball_size(long long t, int a) const {
    if (t < 0 || t >= size()) throw ArgumentError("ball_size: point outside the space");
    long long c = 0;
    for (std::size_t j = 0; j < metric_.size(); ++j)
        if (metric_[static_cast<std::size_t>(t)][j] <= a) ++c;
    return c;
}

long long ExplicitSpace::max_ball_size(int a) const {
    long long best = 1;
    for (long long t = 0; t < size(); ++t) best = std::max(best, ball_size(t, a));
    return best;
}

IndexSpace IndexSpace::box(int dim, int side_param, bool centered) {
    return IndexSpace(std::variant<Box, ExplicitSpace>(Box(dim, side_param, centered)));
}

IndexSpace IndexSpace::explicit_space(std::vector<std::vector<int>> metric) {
    return IndexSpace(std::variant<Box, ExplicitSpace>(ExplicitSpace(std::move(metric))));
}

long long IndexSpace::size() const {
    return std::visit([](const auto& s) { return s.size(); }, impl_);
}

int IndexSpace::dist(long long i, long long j) const {
    return std::visit([&](const auto& s) { return s.dist(i, j); }, impl_);
}

int IndexSpace::diameter() const {
    return std::visit([](const auto& s) { return s.diameter(); }, impl_);
}

long long IndexSpace::ball_size(long long point_index, int a) const {
    if (const Box* b = as_box()) return b->ball_size(b->point(point_index), a);
    return as_explicit()->ball_size(point_index, a);
}

long long IndexSpace::max_ball_size(int a) const {
    return std::visit([&](const auto& s) { return s.max_ball_size(a); }, impl_);
}

IndexSpace make_box(int dim, int side_param, bool centered) {
    return IndexSpace::box(dim, side_param, centered);
}

ConnectedDecomposition connected_decomposition(const IndexSpace& space,
                                               std::span<const long long> tuple, int a) {
    if (tuple.empty()) throw ArgumentError("connected_decomposition: empty tuple");
    if (a < 0) throw ArgumentError("connected_decomposition: negative radius");
    const int k = static_cast<int>(tuple.size());
    for (long long t : tuple)
        if (t < 0 || t >= space.size())
            throw ArgumentError("connected_decomposition: point index outside the space");
    UnionFind uf(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (space.dist(tuple[static_cast<std::size_t>(i)], tuple[static_cast<std::size_t>(j)]) <= a)
                uf.merge(i, j);
    return ConnectedDecomposition{std::vector<long long>(tuple.begin(), tuple.end()), a,
                                  partition_from_components(uf, k)};
}

Partition lattice_decomposition(std::span<const LatticePoint> tuple, int a) {
    if (tuple.empty()) throw ArgumentError("lattice_decomposition: empty tuple");
    if (a < 0) throw ArgumentError("lattice_decomposition: negative radius");
    const int k = static_cast<int>(tuple.size());
    UnionFind uf(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (chebyshev(tuple[static_cast<std::size_t>(i)], tuple[static_cast<std::size_t>(j)]) <= a)
                uf.merge(i, j);
    return partition_from_components(uf, k);
}

void for_each_tuple(const IndexSpace& space, int k,
                    const std::function<void(std::span<const long long>)>& fn) {
    if (k < 1) throw ArgumentError("for_each_tuple: k must be positive");
    const long long m = space.size();
    std::vector<long long> tuple(static_cast<std::size_t>(k), 0);
    while (true) {
        fn(tuple);
        int i = k - 1;
        while (i >= 0 && tuple[static_cast<std::size_t>(i)] == m - 1) {
            tuple[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) return;
        tuple[static_cast<std::size_t>(i)] += 1;
    }
}

namespace {

// Caches pairwise distances densely for small spaces so exhaustive tuple
// scans stay cheap.
class DistanceOracle {
public:
    explicit DistanceOracle(const IndexSpace& space) : space_(space), size_(space.size()) {
        if (size_ <= 2048) {
            dense_.resize(static_cast<std::size_t>(size_ * size_));
            for (long long i = 0; i < size_; ++i)
                for (long long j = 0; j < size_; ++j)
                    dense_[static_cast<std::size_t>(i * size_ + j)] =
                        static_cast<int>(space.dist(i, j));
        }
    }
    int operator()(long long i, long long j) const {
        if (!dense_.empty()) return dense_[static_cast<std::size_t>(i * size_ + j)];
        return space_.dist(i, j);
    }

private:
    const IndexSpace& space_;
    long long size_;
    std::vector<int> dense_;
};

// Allocation-free a-connected decomposition of tuples with k <= 16; writes the
// canonical restricted-growth string of the component partition.
template <class Dist>
void decomposition_rgs(const Dist& dist, std::span<const long long> tuple, int a, int* rgs) {
    const int k = static_cast<int>(tuple.size());
    int parent[16];
    for (int i = 0; i < k; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (dist(tuple[static_cast<std::size_t>(i)], tuple[static_cast<std::size_t>(j)]) <= a)
                parent[find(i)] = find(j);
    int label[16];
    for (int i = 0; i < k; ++i) label[i] = -1;
    int next = 0;
    for (int i = 0; i < k; ++i) {
        const int root = find(i);
        if (label[root] < 0) label[root] = next++;
        rgs[i] = label[root];
    }
}

} // namespace

std::vector<std::vector<long long>> enumerate_tuples(const IndexSpace& space, int k,
                                                     const Partition& pi, int a,
                                                     long long cap) {
    if (pi.ground_size() != k) throw ArgumentError("enumerate_tuples: partition of wrong ground set");
    if (k > 16) throw SizeError("enumerate_tuples: k > 16");
    if (a < 0) throw ArgumentError("enumerate_tuples: negative radius");
    if (cap < 1) throw ArgumentError("enumerate_tuples: cap must be positive");
    if (ipow_capped(space.size(), k, kTupleIterationCap) > kTupleIterationCap)
        throw SizeError("enumerate_tuples: |space|^k exceeds the iteration cap of " +
                        std::to_string(kTupleIterationCap));
    const DistanceOracle dist(space);
    const std::vector<int> want = pi.rgs();
    std::vector<std::vector<long long>> out;
    bool over = false;
    int rgs[16];
    for_each_tuple(space, k, [&](std::span<const long long> t) {
        if (over) return;
        decomposition_rgs(dist, t, a, rgs);
        if (!std::equal(want.begin(), want.end(), rgs)) return;
        if (static_cast<long long>(out.size()) == cap) {
            over = true;
            return;
        }
        out.emplace_back(t.begin(), t.end());
    });
    if (over) throw SizeError("enumerate_tuples: more than " + std::to_string(cap) + " matching tuples");
    return out;
}

CountingLemmaReport verify_counting_lemma(const IndexSpace& space, int k, int a) {
    if (k > 12) throw SizeError("verify_counting_lemma: k > 12");
    if (ipow_capped(space.size(), k, kCountingIterationCap) > kCountingIterationCap)
        throw SizeError("verify_counting_lemma: |space|^k exceeds the cap of " +
                        std::to_string(kCountingIterationCap));
    const std::vector<Partition> all = enumerate_partitions(k, PartitionClass::All);
    std::map<std::vector<int>, std::size_t> row_of;
    for (std::size_t i = 0; i < all.size(); ++i) row_of[all[i].rgs()] = i;

    const DistanceOracle dist(space);
    std::vector<long long> counts(all.size(), 0);
    int rgs_buf[16];
    std::vector<int> rgs_key(static_cast<std::size_t>(k));
    for_each_tuple(space, k, [&](std::span<const long long> t) {
        decomposition_rgs(dist, t, a, rgs_buf);
        std::copy(rgs_buf, rgs_buf + k, rgs_key.begin());
        counts[row_of.at(rgs_key)] += 1;
    });

    CountingLemmaReport report;
    report.k = k;
    report.radius = a;
    report.space_size = space.size();
    report.max_ball = space.max_ball_size(a);
    report.all_hold = true;
    const double size = static_cast<double>(report.space_size);
    const double ball = static_cast<double>(report.max_ball);
    double kfact = 1;
    for (int i = 2; i <= k; ++i) kfact *= i;
    for (std::size_t i = 0; i < all.size(); ++i) {
        CountingLemmaRow row{all[i], counts[i], 0, 0, false};
        double blocks_bound = 1;
        for (const auto& b : all[i].blocks()) {
            double bfact = 1;
            for (std::size_t j = 2; j <= b.size(); ++j) bfact *= static_cast<double>(j);
            blocks_bound *= size * std::pow(ball, static_cast<double>(b.size() - 1)) * bfact;
        }
        row.bound_blocks = blocks_bound;
        row.bound_coarse = kfact * std::pow(size, all[i].block_count()) *
                           std::pow(ball, k - all[i].block_count());
        row.holds = static_cast<double>(row.count) <= row.bound_blocks &&
                    static_cast<double>(row.count) <= row.bound_coarse;
        report.all_hold = report.all_hold && row.holds;
        report.rows.push_back(std::move(row));
    }
    return report;
}

double BoxFamily::size(int n) const {
    const double side = centered_ ? 2.0 * n + 1.0 : static_cast<double>(n);
    return std::pow(side, dim_);
}

double BoxFamily::diameter(int n) const { return centered_ ? 2.0 * n : n - 1.0; }

double BoxFamily::max_ball(int n, int a) const {
    const double side = centered_ ? 2.0 * n + 1.0 : static_cast<double>(n);
    return std::pow(std::min(2.0 * a + 1.0, side), dim_);
}

int BoxFamily::scaling_index(int ell, int n) {
    if (ell < 1 || n < 1) throw ArgumentError("scaling_index: ell and n must be positive");
    int a = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / ell)));
    a = std::max(a, 1);
    // Fix floating-point rounding with exact integer checks.
    while (ipow_capped(a + 1, ell, n) <= n) ++a;
    while (a > 1 && ipow_capped(a, ell, n) > n) --a;
    return a;
}

} // namespace cltlab
