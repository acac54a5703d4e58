#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cltlab/lattice.hpp"
#include "cltlab/partitions.hpp"

namespace cltlab {

/// Axis-aligned lattice box with the Chebyshev metric. centered=true gives
/// {-n..n}^d, otherwise {1..n}^d. Points are addressed by a row-major index
/// (first coordinate slowest), which fixes the enumeration order everywhere.
class Box {
public:
    Box(int dim, int side_param, bool centered);

    int dim() const { return dim_; }
    bool centered() const { return centered_; }
    int side_param() const { return n_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int side_length() const { return hi_ - lo_ + 1; }
    long long size() const { return size_; }
    int diameter() const { return hi_ - lo_; }

    LatticePoint point(long long index) const;
    long long index_of(const LatticePoint& p) const; // -1 when outside
    bool contains(const LatticePoint& p) const;

    int dist(long long i, long long j) const { return chebyshev(point(i), point(j)); }

    /// |B_a(t)| inside the box, in closed form.
    long long ball_size(const LatticePoint& t, int a) const;
    long long max_ball_size(int a) const;

private:
    int dim_;
    int n_;
    bool centered_;
    int lo_, hi_;
    long long size_;
};

/// Arbitrary finite metric space given by a dense N0-valued matrix; intended
/// for small test metrics (<= 1000 points).
class ExplicitSpace {
public:
    explicit ExplicitSpace(std::vector<std::vector<int>> metric);

    long long size() const { return static_cast<long long>(metric_.size()); }
    int dist(long long i, long long j) const {
        return metric_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    int diameter() const { return diameter_; }
    long long ball_size(long long t, int a) const;
    long long max_ball_size(int a) const;
    const std::vector<std::vector<int>>& metric() const { return metric_; }

private:
    std::vector<std::vector<int>> metric_;
    int diameter_;
};

/// Value-semantic wrapper over the two space kinds.
class IndexSpace {
public:
    static IndexSpace box(int dim, int side_param, bool centered);
    static IndexSpace explicit_space(std::vector<std::vector<int>> metric);

    long long size() const;
    int dist(long long i, long long j) const;
    int diameter() const;
    long long ball_size(long long point_index, int a) const;
    long long max_ball_size(int a) const;

    const Box* as_box() const { return std::get_if<Box>(&impl_); }
    const ExplicitSpace* as_explicit() const { return std::get_if<ExplicitSpace>(&impl_); }

private:
    explicit IndexSpace(std::variant<Box, ExplicitSpace> impl) : impl_(std::move(impl)) {}
    std::variant<Box, ExplicitSpace> impl_;
};

/// Box constructor with the library-wide caps (dim <= 4, <= 1e6 points).
IndexSpace make_box(int dim, int side_param, bool centered);

/// A tuple decomposed into its a-connected parts: points inside a block are
/// chained with steps <= a, distinct blocks sit at distance > a.
struct ConnectedDecomposition {
    std::vector<long long> tuple; ///< point indices
    int radius = 0;
    Partition partition;
};

/// The unique decomposition partition, via connected components of the graph
/// with edges d(t_i, t_j) <= a (union-find).
ConnectedDecomposition connected_decomposition(const IndexSpace& space,
                                               std::span<const long long> tuple, int a);

/// Same computation directly on lattice points with the Chebyshev metric.
Partition lattice_decomposition(std::span<const LatticePoint> tuple, int a);

/// Visits every k-tuple of point indices in lexicographic order.
void for_each_tuple(const IndexSpace& space, int k,
                    const std::function<void(std::span<const long long>)>& fn);

/// All k-tuples whose decomposition at radius a equals pi, lexicographic.
/// Errors when more than cap tuples match or |space|^k exceeds the iteration cap.
std::vector<std::vector<long long>> enumerate_tuples(const IndexSpace& space, int k,
                                                     const Partition& pi, int a,
                                                     long long cap);

struct CountingLemmaRow {
    Partition partition;
    long long count = 0;
    double bound_blocks = 0;  ///< prod_B |T| b(a)^{|B|-1} |B|!
    double bound_coarse = 0;  ///< k! |T|^{|pi|} b(a)^{k-|pi|}
    bool holds = false;
};

struct CountingLemmaReport {
    int k = 0;
    int radius = 0;
    long long space_size = 0;
    long long max_ball = 0;
    std::vector<CountingLemmaRow> rows;
    bool all_hold = false;
};

/// Exhaustively counts |T^k(pi|a)| for every pi in P(k) and checks both
/// combinatorial bounds.
CountingLemmaReport verify_counting_lemma(const IndexSpace& space, int k, int a);

/// Family of boxes indexed by the side parameter, with analytic cardinality,
/// diameter and ball-size formulas so diagnostics never materialize points.
class BoxFamily {
public:
    BoxFamily(int dim, bool centered) : dim_(dim), centered_(centered) {}

    int dim() const { return dim_; }
    bool centered() const { return centered_; }

    IndexSpace space(int n) const { return make_box(dim_, n, centered_); }
    Box box(int n) const { return Box(dim_, n, centered_); }

    double size(int n) const;
    double diameter(int n) const;
    double max_ball(int n, int a) const;

    /// floor(n^(1/ell)), computed with exact integer checks.
    static int scaling_index(int ell, int n);

private:
    int dim_;
    bool centered_;
};

} // namespace cltlab
