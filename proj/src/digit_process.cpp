#include "cltlab/digit_process.hpp"

#include "cltlab/errors.hpp"
#include "cltlab/philox.hpp"

namespace cltlab {

int DigitProcess::digit_at(long long n) const {
    const auto block = philox_block(seed_, static_cast<std::uint64_t>(n), 0x646967697473ull);
    const int d = static_cast<int>(u01(block[0], block[1]) * 10.0);
    return d > 9 ? 9 : d;
}

double DigitProcess::value_at(long long n) const {
    // Exact decimal: digits 1..kDepth as one integer over 10^kDepth.
    long long mantissa = 0;
    for (int k = 1; k <= kDepth; ++k) mantissa = mantissa * 10 + digit_at(n + k);
    double scale = 1.0;
    for (int k = 0; k < kDepth; ++k) scale *= 10.0;
    return static_cast<double>(digit_at(n)) + static_cast<double>(mantissa) / scale;
}

std::vector<double> DigitProcess::window(long long lo, long long hi) const {
    if (hi < lo) throw ArgumentError("DigitProcess::window: empty range");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long n = lo; n <= hi; ++n) out.push_back(value_at(n));
    return out;
}

Rational shared_digit_gap(int alphabet) {
    if (alphabet < 2) throw ArgumentError("shared_digit_gap: alphabet must have at least 2 symbols");
    // Both events are {Y = symbol} for the same digit position, so
    // P(A and B) = P(A) = 1/alphabet under the uniform digit law.
    const Rational p(1, alphabet);
    const Rational joint = p;
    return joint - p * p;
}

Rational disjoint_digit_gap(int alphabet) {
    if (alphabet < 2) throw ArgumentError("disjoint_digit_gap: alphabet must have at least 2 symbols");
    // Distinct digit positions are independent coordinates.
    const Rational p(1, alphabet);
    const Rational joint = p * p;
    return joint - p * p;
}

Rational nonmixing_witness() { return shared_digit_gap(10); }

} // namespace cltlab
