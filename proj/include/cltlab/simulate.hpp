#pragma once

#include <cstdint>
#include <vector>

#include "cltlab/index_spaces.hpp"
#include "cltlab/innovations.hpp"
#include "cltlab/ma_coefficients.hpp"

namespace cltlab {

/// One realization of a process on a box window, values in box index order.
struct ProcessWindow {
    Box box;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

/// Counter-based innovation field: the value at a lattice point depends only
/// on (seed, point), so windows of any shape agree on shared points and
/// parallel generation is order-independent.
class InnovationField {
public:
    InnovationField(InnovationSpec spec, std::uint64_t seed) : spec_(spec), seed_(seed) {}

    double operator()(const LatticePoint& p) const {
        return spec_.sample(uniform_pair(philox_block_at(seed_, p)));
    }

private:
    InnovationSpec spec_;
    std::uint64_t seed_;
};

/// X_t = sum_s c_s Y_{t-s} over the finite support, with Y supplied by any
/// callable lattice point -> double (the test hook).
template <class Source>
ProcessWindow simulate_ma_window_with(const MACoefficients& coeffs, const Box& box,
                                      Source&& innovation_at, std::uint64_t seed = 0);

/// The production path: innovations drawn from the counter-based field.
ProcessWindow simulate_ma_window(const MACoefficients& coeffs, const InnovationSpec& innov,
                                 const Box& box, std::uint64_t seed);

// -- implementation -----------------------------------------------------------

template <class Source>
ProcessWindow simulate_ma_window_with(const MACoefficients& coeffs, const Box& box,
                                      Source&& innovation_at, std::uint64_t seed) {
    if (coeffs.dim() != box.dim())
        throw ArgumentError("simulate_ma_window: coefficient dimension " +
                            std::to_string(coeffs.dim()) + " does not match box dimension " +
                            std::to_string(box.dim()));
    const int dim = box.dim();

    // Bounding box of every innovation the window needs: per axis
    // [box.lo - max s_i, box.hi - min s_i] over the support.
    int smin[kMaxDim] = {0, 0, 0, 0};
    int smax[kMaxDim] = {0, 0, 0, 0};
    bool first = true;
    for (const auto& [s, c] : coeffs.entries()) {
        for (int i = 0; i < dim; ++i) {
            if (first || s[i] < smin[i]) smin[i] = s[i];
            if (first || s[i] > smax[i]) smax[i] = s[i];
        }
        first = false;
    }
    int ylo[kMaxDim] = {0, 0, 0, 0};
    long long ylen[kMaxDim] = {1, 1, 1, 1};
    long long ytotal = 1;
    for (int i = 0; i < dim; ++i) {
        ylo[i] = box.lo() - smax[i];
        const long long hi = box.hi() - smin[i];
        ylen[i] = hi - ylo[i] + 1;
        ytotal *= ylen[i];
    }
    if (ytotal > 8'000'000) throw SizeError("simulate_ma_window: enlarged innovation grid too large");

    // Materialize innovations on the enlarged grid (row-major).
    std::vector<double> y(static_cast<std::size_t>(ytotal));
    {
        LatticePoint p;
        for (long long idx = 0; idx < ytotal; ++idx) {
            long long rem = idx;
            for (int i = dim - 1; i >= 0; --i) {
                p[i] = ylo[i] + static_cast<int>(rem % ylen[i]);
                rem /= ylen[i];
            }
            y[static_cast<std::size_t>(idx)] = innovation_at(p);
        }
    }
    auto y_index = [&](const LatticePoint& p) {
        long long idx = 0;
        for (int i = 0; i < dim; ++i) idx = idx * ylen[i] + (p[i] - ylo[i]);
        return idx;
    };

    ProcessWindow window{box, std::vector<double>(static_cast<std::size_t>(box.size())), seed};
    for (long long t = 0; t < box.size(); ++t) {
        const LatticePoint pt = box.point(t);
        double x = 0.0;
        for (const auto& [s, c] : coeffs.entries())
            x += c * y[static_cast<std::size_t>(y_index(pt - s))];
        window.values[static_cast<std::size_t>(t)] = x;
    }
    return window;
}

inline ProcessWindow simulate_ma_window(const MACoefficients& coeffs, const InnovationSpec& innov,
                                        const Box& box, std::uint64_t seed) {
    return simulate_ma_window_with(coeffs, box, InnovationField(innov, seed), seed);
}

} // namespace cltlab
