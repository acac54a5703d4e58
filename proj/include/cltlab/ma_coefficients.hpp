#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cltlab/lattice.hpp"

namespace cltlab {

/// How a coefficient family is specified before truncation.
struct CoefficientDescriptor {
    enum class Family { Explicit, Geometric, PolynomialDecay };

    Family family = Family::Explicit;
    int dim = 1;
    // Geometric: c_s = rho^{|s|} (two_sided over the Chebyshev norm) or
    // c_s = rho^s for s >= 0 (one-sided, dim 1 only).
    double rho = 0.5;
    bool two_sided = false;
    // PolynomialDecay (dim 1, two-sided): c_s = (1+|s|)^{-beta}, beta > dim+1.
    double beta = 4.0;
    // Explicit entries.
    std::vector<std::pair<LatticePoint, double>> entries;

    static CoefficientDescriptor explicit_list(int dim, std::vector<std::pair<LatticePoint, double>> entries);
    static CoefficientDescriptor geometric(double rho, bool two_sided, int dim = 1);
    static CoefficientDescriptor polynomial(double beta);
};

/// Finitely supported real coefficient family on Z^d with norm queries and an
/// honest bound on the mass dropped by truncation.
class MACoefficients {
public:
    MACoefficients(int dim, std::vector<std::pair<LatticePoint, double>> entries,
                   double truncation_error, std::string provenance);

    int dim() const { return dim_; }
    const std::vector<std::pair<LatticePoint, double>>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    int support_radius() const { return support_radius_; }
    const std::string& provenance() const { return provenance_; }

    /// c_s, zero off the stored support.
    double at(const LatticePoint& s) const;

    double l1_norm() const { return l1_; }
    /// sum_s |c_s|^m
    double power_sum(int m) const;
    /// sum_s c_s (signed)
    double coefficient_sum() const;
    /// sum over chebyshev_norm(s) > radius of |c_s| (stored support only).
    double l1_outside(int radius) const;
    /// Separation decay gamma(a): stored l1 mass strictly outside radius a/2,
    /// i.e. at distance >= floor(a/2) + 1.
    double gamma(int a) const;

    /// Certified bound on the l1 mass the truncation dropped.
    double truncation_error() const { return truncation_error_; }
    /// Bound on the untruncated family's l1 mass outside B_a(0).
    double tail_bound(int a) const { return l1_outside(a) + truncation_error_; }

private:
    int dim_;
    std::vector<std::pair<LatticePoint, double>> entries_; // sorted by point, zeros dropped
    std::unordered_map<LatticePoint, double, LatticePointHash> lookup_;
    double truncation_error_;
    std::string provenance_;
    double l1_ = 0.0;
    int support_radius_ = 0;
};

/// Truncates a closed-form family to finite support with certified l1 tail
/// <= tol; explicit lists pass through unchanged.
MACoefficients truncate_coefficients(const CoefficientDescriptor& descriptor, double tol);

} // namespace cltlab
