#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cltlab/ma_coefficients.hpp"

namespace cltlab {

/// ARMA(p, q) recursion X_t + sum_j a_j X_{t-j} = Y_t + sum_j b_j Y_{t-j}.
/// The generating polynomials carry an implicit constant coefficient 1.
struct ArmaModel {
    std::vector<double> ar; ///< a_1..a_p
    std::vector<double> ma; ///< b_1..b_q

    // Populated by arma_reduce: the common linear factors of A and B removed
    // from both sides, normalized to constant term 1.
    bool reduced = false;
    std::vector<double> ar_reduced;                 ///< A0 coefficients, low to high, [1, ...]
    std::vector<double> ma_reduced;                 ///< matching numerator, low to high, [1, ...]
    std::vector<std::complex<double>> ar_roots;     ///< roots of A0, with multiplicity

    std::vector<double> ar_poly() const; ///< [1, a_1..a_p]
    std::vector<double> ma_poly() const; ///< [1, b_1..b_q]
};

/// All complex roots of the polynomial sum_j coeffs[j] z^j (coeffs low to
/// high), via balanced companion-matrix eigenvalues plus one Newton step.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Removes linear factors shared by A and B (roots paired within root_tol)
/// from both polynomials and renormalizes so the reduced A has constant term 1.
ArmaModel arma_reduce(ArmaModel model, double root_tol = 1e-8);

/// Two-sided MA expansion of the reduced recursion, truncated at l1 tail <=
/// tol. Roots of the reduced A outside the unit circle expand causally, roots
/// inside anticausally; a root on the unit circle (within unit_circle_tol)
/// means no solution exists.
MACoefficients arma_to_ma(const ArmaModel& model, double tol = 1e-12,
                          double unit_circle_tol = 1e-8);

} // namespace cltlab
