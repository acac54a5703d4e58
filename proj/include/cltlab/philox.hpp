#pragma once

#include <array>
#include <cstdint>

#include "cltlab/lattice.hpp"

namespace cltlab {

// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011). A value is
// a pure function of (key, counter); streams indexed by counters are
// statistically independent, which is what makes parallel simulation
// order-independent and windows of different sizes agree on shared points.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> eval(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWey0 = 0x9E3779B9u;
        constexpr std::uint32_t kWey1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWey0;
            key[1] += kWey1;
        }
        return ctr;
    }
};

/// One 128-bit block keyed by a 64-bit seed and a 128-bit counter (a, b).
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t a,
                                                 std::uint64_t b = 0) {
    return Philox4x32::eval({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                             static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)},
                            {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

/// Block keyed by seed with the counter taken from lattice coordinates, one
/// 32-bit lane per dimension.
inline std::array<std::uint32_t, 4> philox_block_at(std::uint64_t seed, const LatticePoint& p) {
    return Philox4x32::eval({static_cast<std::uint32_t>(p[0]), static_cast<std::uint32_t>(p[1]),
                             static_cast<std::uint32_t>(p[2]), static_cast<std::uint32_t>(p[3])},
                            {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

/// Deterministic 64-bit sub-seed, e.g. per (n, replication).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    const auto r = philox_block(seed, a, b);
    return (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
}

/// Uniform double in [0, 1) from two 32-bit lanes (53 significant bits).
inline double u01(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t v = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1], suitable for logarithms.
inline double u01_open0(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t v = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>((v >> 11) + 1) * 0x1.0p-53;
}

/// The two independent uniforms carried by one Philox block.
struct UniformPair {
    double u0; ///< in [0, 1)
    double u1; ///< in (0, 1]
};

inline UniformPair uniform_pair(const std::array<std::uint32_t, 4>& block) {
    return {u01(block[0], block[1]), u01_open0(block[2], block[3])};
}

} // namespace cltlab
