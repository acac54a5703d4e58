#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cltlab/index_spaces.hpp"
#include "cltlab/innovations.hpp"
#include "cltlab/ma_coefficients.hpp"

namespace cltlab {

/// Finite-grid evidence for one growth/decay condition. Verdicts are trend
/// statements over the evaluated grid, never asymptotic proofs.
struct ConditionVerdict {
    std::string condition; ///< "S1", "S2", "S3", "S4", "M1", "M2", "M3"
    std::string params;    ///< e.g. "k=3" or "ell=2"
    std::string verdict;   ///< "pass" | "indeterminate" | "fail"
    std::vector<std::pair<double, double>> grid; ///< (n, evaluated quantity)
    std::string note;
};

struct ConditionDiagnostics {
    std::vector<ConditionVerdict> rows;
    bool any_fail = false;
};

/// Space-side conditions on a box family:
///  S1  |T_n|^k gamma(n) must trend to zero (monotone over the top half).
///  S2  best-fit constants (C, c) with b_n(a) <= C |T_a|^c over the grid;
///      pass when the top half of the grid does not worsen the fit.
///  S3  |T_n| >= n and monotone diameters, checked exactly on the grid.
///  S4  a_n = floor(n^{1/ell}): |T_{a_n}|^ell / |T_n| must stay inside the
///      band observed on the bottom half of the grid (slack factor 1.25).
ConditionDiagnostics space_condition_diagnostics(const BoxFamily& family,
                                                 const std::function<double(int)>& gamma,
                                                 std::span<const int> k_list,
                                                 std::span<const int> ell_list,
                                                 std::span<const int> n_grid);

/// Moment-side conditions for a finitely supported MA field:
///  M1  E X_t = 0 exactly (centered innovations).
///  M2  the normalized second-moment partial sums stabilize on the grid.
///  M3  M_k finite for every requested k (values reported).
ConditionDiagnostics moment_condition_diagnostics(const MACoefficients& coeffs,
                                                  const InnovationSpec& innov,
                                                  std::span<const int> k_list,
                                                  std::span<const int> n_grid);

} // namespace cltlab
