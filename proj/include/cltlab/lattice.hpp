#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace cltlab {

/// Maximum lattice dimension supported throughout the library.
inline constexpr int kMaxDim = 4;

/// A point of Z^d, d <= kMaxDim. Unused trailing coordinates stay zero so that
/// equality, ordering and hashing are dimension-agnostic.
struct LatticePoint {
    std::array<int, kMaxDim> x{0, 0, 0, 0};

    constexpr LatticePoint() = default;
    constexpr LatticePoint(int a) : x{a, 0, 0, 0} {}
    constexpr LatticePoint(int a, int b) : x{a, b, 0, 0} {}
    constexpr LatticePoint(int a, int b, int c) : x{a, b, c, 0} {}
    constexpr LatticePoint(int a, int b, int c, int d) : x{a, b, c, d} {}

    constexpr int operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
    constexpr int& operator[](int i) { return x[static_cast<std::size_t>(i)]; }

    friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

    friend constexpr LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
        LatticePoint r;
        for (int i = 0; i < kMaxDim; ++i) r.x[static_cast<std::size_t>(i)] = a[i] + b[i];
        return r;
    }
    friend constexpr LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
        LatticePoint r;
        for (int i = 0; i < kMaxDim; ++i) r.x[static_cast<std::size_t>(i)] = a[i] - b[i];
        return r;
    }
};

/// Chebyshev (max-coordinate) distance, the canonical N0-valued lattice metric.
constexpr int chebyshev(const LatticePoint& a, const LatticePoint& b) {
    int d = 0;
    for (int i = 0; i < kMaxDim; ++i) {
        const int v = a[i] >= b[i] ? a[i] - b[i] : b[i] - a[i];
        if (v > d) d = v;
    }
    return d;
}

/// Chebyshev norm of a point, i.e. distance to the origin.
constexpr int chebyshev_norm(const LatticePoint& a) { return chebyshev(a, LatticePoint{}); }

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const {
        // FNV-1a over the four coordinates.
        std::uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < kMaxDim; ++i) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[i]));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

inline std::string to_string(const LatticePoint& p, int dim) {
    std::string s = "(";
    for (int i = 0; i < dim; ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    s += ")";
    return s;
}

} // namespace cltlab
