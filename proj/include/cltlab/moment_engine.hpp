#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cltlab/index_spaces.hpp"
#include "cltlab/innovations.hpp"
#include "cltlab/ma_coefficients.hpp"
#include "cltlab/moment_kernel.hpp"

namespace cltlab {

/// Exact mixed moment of a finitely supported MA field, with the per-kernel
/// breakdown of the partition expansion.
struct MomentReport {
    std::vector<LatticePoint> tuple;
    double value = 0.0;
    std::int64_t assignments = 0;
    std::vector<KernelBreakdownRow<double>> breakdown;
};

MomentReport exact_mixed_moment(const MACoefficients& coeffs, const InnovationSpec& innov,
                                std::span<const LatticePoint> tuple,
                                std::int64_t assignment_cap = 10'000'000);

/// E X_t X_t' = sum_s c_{t-s} c_{t'-s}, an exact finite sum.
double covariance(const MACoefficients& coeffs, const LatticePoint& t, const LatticePoint& t2);

/// Autocovariance at lag h: r(h) = sum_u c_u c_{u+h}.
double autocovariance(const MACoefficients& coeffs, const LatticePoint& h);

/// Normalized second moment of the window sum and its limit.
struct LongRunVariance {
    std::vector<std::pair<int, double>> partials; ///< n -> (1/|T_n|) sum E X_s X_t
    std::optional<double> closed_form;            ///< (sum
                                                  ///< c)^2 for finite support
    std::optional<double> extrapolated;           ///< linear-in-1/side Richardson value

    /// The authoritative value: the closed form when present, otherwise the
    /// extrapolation (falling back to the last partial).
    double value() const;
};

/// Exact partials on boxes via lag weights, plus the closed-form limit.
LongRunVariance sigma2(const MACoefficients& coeffs, const BoxFamily& family,
                       std::span<const int> n_grid);

/// Exact finite-n value (1/|T_n|) sum_{s,t in T_n} E X_s X_t for one box.
double finite_window_second_moment(const MACoefficients& coeffs, const Box& box);

/// Moment separation certificate: how close the mixed moment over a tuple
/// comes to the product over its a-connected parts, against the constant
/// C_k gamma(a).
struct SeparationCertificate {
    std::vector<LatticePoint> tuple;
    int radius = 0;
    Partition partition;
    double full_moment = 0.0;
    double block_product = 0.0;
    double lhs = 0.0;     ///< |full - product|
    double c_k = 0.0;     ///< 2 M'_k #P(k) k^k |c|_1^k
    double gamma_a = 0.0; ///< l1 mass outside the radius-floor(a/2) ball
    double rhs = 0.0;     ///< c_k * gamma_a
    bool holds = false;   ///< lhs <= rhs + 1e-12
};

SeparationCertificate separation_certificate(const MACoefficients& coeffs,
                                             const InnovationSpec& innov, const Box& box,
                                             std::span<const LatticePoint> tuple, int a,
                                             std::int64_t assignment_cap = 10'000'000);

/// One instance of the block-sum decay inequality: for points containing
/// representatives of ell pairwise a-separated groups,
///   sum_s prod_i |c_{t_i - s}|
///     <= ell |c|_1^{|K|-ell+1} gamma(a)^{ell-1}.
struct DecayBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    int ell = 0;
    int block_size = 0;
    bool holds = false; ///< lhs <= rhs + 1e-12
};

/// labels[i] names the separated group of points[i]; points with different
/// labels must sit at distance > a (checked), and ell must equal the number
/// of distinct labels.
DecayBoundReport decay_bound_check(const MACoefficients& coeffs,
                                   std::span<const LatticePoint> points,
                                   std::span<const int> labels, int a, int ell);

/// Uniform moment bound M_k = sum over partitions with blocks >= 2 of
/// prod_K M'_{|K|} sum_s |c_s|^{|K|}; evaluated by the complete Bell
/// polynomial recurrence over g_m = M'_m sum|c|^m, g_1 = 0.
double moment_bound(const MACoefficients& coeffs, const InnovationSpec& innov, int k);

struct SeparationConstants {
    double c_k = 0.0;
    std::function<double(int)> gamma; ///< a -> l1 mass outside radius floor(a/2)
};

SeparationConstants separation_constants(const MACoefficients& coeffs,
                                         const InnovationSpec& innov, int k);

/// Right-hand side of the mixing product bound: 24 M sum_l sqrt(alpha_l).
/// Requires M >= 1 and alphas in [0, 1].
double mixing_product_bound(double moment_cap, std::span<const double> alphas);

} // namespace cltlab
