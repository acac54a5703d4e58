#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <vector>

namespace cltlab {

using Rational = boost::rational<long long>;

/// The stream of random decimal numbers X_n = Y_n . Y_{n+1} Y_{n+2} ... built
/// from i.i.d. digits uniform on {0..9}, truncated at a fixed depth below
/// double resolution of the leading-digit events.
class DigitProcess {
public:
    static constexpr int kDepth = 17;

    explicit DigitProcess(std::uint64_t seed) : seed_(seed) {}

    /// The digit Y_n.
    int digit_at(long long n) const;
    /// X_n as a double (always in [0, 10)).
    double value_at(long long n) const;
    /// Values X_lo .. X_hi.
    std::vector<double> window(long long lo, long long hi) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Dependence gap |P(A and B) - P(A) P(B)| for the canonical event pair on a
/// uniform digit stream where both events reduce to the same single digit
/// hitting a fixed symbol: p - p^2 with p = 1/alphabet, computed exactly.
Rational shared_digit_gap(int alphabet);

/// Same computation when the two events look at distinct digit positions;
/// independence makes the gap exactly zero.
Rational disjoint_digit_gap(int alphabet);

/// The canonical witness on decimal digits: shared_digit_gap(10) = 9/100.
/// However far apart the windows sit, such event pairs exist, so the stream
/// is not alpha-mixing.
Rational nonmixing_witness();

} // namespace cltlab
