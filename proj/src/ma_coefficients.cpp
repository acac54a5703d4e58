#include "cltlab/ma_coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "cltlab/errors.hpp"

namespace cltlab {

namespace {

// Number of lattice points of Z^d at Chebyshev norm exactly r.
double sphere_count(int dim, int r) {
    if (r == 0) return 1.0;
    return std::pow(2.0 * r + 1.0, dim) - std::pow(2.0 * r - 1.0, dim);
}

// l1 mass of the geometric family rho^{|s|} strictly beyond radius R,
// summed numerically with a rigorous remainder cutoff.
double geometric_tail(int dim, double rho, int R) {
    double tail = 0.0;
    for (int r = R + 1;; ++r) {
        const double term = std::pow(rho, r) * sphere_count(dim, r);
        tail += term;
        // Beyond this r the terms are dominated by a geometric series with
        // ratio q < 1; stop once the remainder bound is negligible.
        const double q = rho * std::pow((2.0 * r + 3.0) / (2.0 * r + 1.0), dim);
        if (q < 1.0 && term * q / (1.0 - q) < 1e-18 * (tail + 1e-300)) break;
        if (r > R + 100000) break;
    }
    return tail;
}

} // namespace

CoefficientDescriptor CoefficientDescriptor::explicit_list(
    int dim, std::vector<std::pair<LatticePoint, double>> entries) {
    CoefficientDescriptor d;
    d.family = Family::Explicit;
    d.dim = dim;
    d.entries = std::move(entries);
    return d;
}

CoefficientDescriptor CoefficientDescriptor::geometric(double rho, bool two_sided, int dim) {
    CoefficientDescriptor d;
    d.family = Family::Geometric;
    d.rho = rho;
    d.two_sided = two_sided;
    d.dim = dim;
    return d;
}

CoefficientDescriptor CoefficientDescriptor::polynomial(double beta) {
    CoefficientDescriptor d;
    d.family = Family::PolynomialDecay;
    d.beta = beta;
    d.dim = 1;
    return d;
}

MACoefficients::MACoefficients(int dim, std::vector<std::pair<LatticePoint, double>> entries,
                               double truncation_error, std::string provenance)
    : dim_(dim), truncation_error_(truncation_error), provenance_(std::move(provenance)) {
    if (dim < 1 || dim > kMaxDim) throw ArgumentError("MACoefficients: dim outside 1.." + std::to_string(kMaxDim));
    entries_.reserve(entries.size());
    for (auto& [s, c] : entries) {
        if (c == 0.0) continue; // zeros dropped
        for (int i = dim_; i < kMaxDim; ++i)
            if (s[i] != 0) throw ArgumentError("MACoefficients: entry uses more than dim coordinates");
        entries_.emplace_back(s, c);
    }
    if (entries_.empty()) throw ArgumentError("MACoefficients: empty support");
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].first == entries_[i - 1].first)
            throw ArgumentError("MACoefficients: duplicate support point");
    for (const auto& [s, c] : entries_) {
        lookup_.emplace(s, c);
        l1_ += std::abs(c);
        support_radius_ = std::max(support_radius_, chebyshev_norm(s));
    }
}

double MACoefficients::at(const LatticePoint& s) const {
    const auto it = lookup_.find(s);
    return it == lookup_.end() ? 0.0 : it->second;
}

double MACoefficients::power_sum(int m) const {
    if (m < 1) throw ArgumentError("power_sum: order must be positive");
    double r = 0.0;
    for (const auto& [s, c] : entries_) r += std::pow(std::abs(c), m);
    return r;
}

double MACoefficients::coefficient_sum() const {
    double r = 0.0;
    for (const auto& [s, c] : entries_) r += c;
    return r;
}

double MACoefficients::l1_outside(int radius) const {
    double r = 0.0;
    for (const auto& [s, c] : entries_)
        if (chebyshev_norm(s) > radius) r += std::abs(c);
    return r;
}

double MACoefficients::gamma(int a) const {
    if (a < 0) throw ArgumentError("gamma: negative radius");
    return l1_outside(a / 2);
}

MACoefficients truncate_coefficients(const CoefficientDescriptor& d, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("truncate_coefficients: tol must be positive");
    switch (d.family) {
    case CoefficientDescriptor::Family::Explicit:
        return MACoefficients(d.dim, d.entries, 0.0, "explicit");

    case CoefficientDescriptor::Family::Geometric: {
        const double rho = d.rho;
        if (!(std::abs(rho) > 0.0 && std::abs(rho) < 1.0))
            throw ModelError("geometric coefficients need 0 < |rho| < 1");
        if (!d.two_sided && d.dim != 1)
            throw ArgumentError("one-sided geometric coefficients are one-dimensional");
        const double ar = std::abs(rho);
        std::vector<std::pair<LatticePoint, double>> entries;
        double tail = 0.0;
        if (!d.two_sided) {
            // Minimal R with tail |rho|^{R+1}/(1-|rho|) <= tol.
            int R = 0;
            while (std::pow(ar, R + 1) / (1.0 - ar) > tol) {
                ++R;
                if (R > 100000) throw ModelError("geometric truncation does not reach tol");
            }
            for (int s = 0; s <= R; ++s)
                entries.emplace_back(LatticePoint(s), std::pow(rho, s));
            tail = std::pow(ar, R + 1) / (1.0 - ar);
        } else {
            int R = 0;
            while (geometric_tail(d.dim, ar, R) > tol) {
                ++R;
                if (R > 100000) throw ModelError("geometric truncation does not reach tol");
            }
            // All lattice points with chebyshev norm <= R.
            const int side = 2 * R + 1;
            long long count = 1;
            for (int i = 0; i < d.dim; ++i) count *= side;
            if (count > 2'000'000) throw SizeError("geometric truncation support exceeds 2e6 points");
            for (long long idx = 0; idx < count; ++idx) {
                LatticePoint p;
                long long rem = idx;
                for (int i = d.dim - 1; i >= 0; --i) {
                    p[i] = static_cast<int>(rem % side) - R;
                    rem /= side;
                }
                entries.emplace_back(p, std::pow(rho, chebyshev_norm(p)));
            }
            tail = geometric_tail(d.dim, ar, R);
        }
        return MACoefficients(d.dim, std::move(entries), tail,
                              std::string("geometric(rho=") + std::to_string(rho) +
                                  (d.two_sided ? ",two_sided" : ",one_sided") + ")");
    }

    case CoefficientDescriptor::Family::PolynomialDecay: {
        const double beta = d.beta;
        if (!(beta > d.dim + 1))
            throw ModelError("polynomial decay needs beta > dim + 1 for the moment conditions");
        // Integral bound: 2 sum_{s>R} (1+s)^{-beta} <= 2 (1+R)^{1-beta}/(beta-1).
        auto bound = [&](int R) { return 2.0 * std::pow(1.0 + R, 1.0 - beta) / (beta - 1.0); };
        int R = 1;
        while (bound(R) > tol) {
            ++R;
            if (R > 10'000'000) throw ModelError("polynomial truncation does not reach tol");
        }
        std::vector<std::pair<LatticePoint, double>> entries;
        entries.emplace_back(LatticePoint(0), 1.0);
        for (int s = 1; s <= R; ++s) {
            const double c = std::pow(1.0 + s, -beta);
            entries.emplace_back(LatticePoint(s), c);
            entries.emplace_back(LatticePoint(-s), c);
        }
        return MACoefficients(1, std::move(entries), bound(R),
                              "polynomial(beta=" + std::to_string(beta) + ")");
    }
    }
    throw ArgumentError("truncate_coefficients: unknown family");
}

} // namespace cltlab
