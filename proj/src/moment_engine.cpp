#include "cltlab/moment_engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cltlab/errors.hpp"

namespace cltlab {

namespace {

constexpr double kCertificateSlack = 1e-12;

} // namespace

MomentReport exact_mixed_moment(const MACoefficients& coeffs, const InnovationSpec& innov,
                                std::span<const LatticePoint> tuple,
                                std::int64_t assignment_cap) {
    auto result = mixed_moment_over_kernels<double>(
        coeffs.dim(), std::span<const std::pair<LatticePoint, double>>(coeffs.entries()),
        [&](int m) { return innov.signed_moment(m); }, tuple, assignment_cap);
    MomentReport report;
    report.tuple.assign(tuple.begin(), tuple.end());
    report.value = result.value;
    report.assignments = result.assignments;
    report.breakdown = std::move(result.breakdown);
    return report;
}

double covariance(const MACoefficients& coeffs, const LatticePoint& t, const LatticePoint& t2) {
    return autocovariance(coeffs, t2 - t);
}

double autocovariance(const MACoefficients& coeffs, const LatticePoint& h) {
    double r = 0.0;
    for (const auto& [u, c] : coeffs.entries()) r += c * coeffs.at(u + h);
    return r;
}

double LongRunVariance::value() const {
    if (closed_form) return *closed_form;
    if (extrapolated) return *extrapolated;
    if (!partials.empty()) return partials.back().second;
    throw ArgumentError("LongRunVariance: empty");
}

double finite_window_second_moment(const MACoefficients& coeffs, const Box& box) {
    if (coeffs.dim() != box.dim())
        throw ArgumentError("finite_window_second_moment: dimension mismatch");
    // (1/|T|) sum_{s,t} E X_s X_t = sum_h r(h) * #{(s,t): t-s=h} / |T| with the
    // pair count per axis (side - |h_i|)+ on boxes; r vanishes off the
    // difference set of the support.
    std::set<LatticePoint> diffs;
    for (const auto& [u, cu] : coeffs.entries())
        for (const auto& [v, cv] : coeffs.entries()) diffs.insert(v - u);
    const double side = static_cast<double>(box.side_length());
    double total = 0.0;
    for (const LatticePoint& h : diffs) {
        double pairs = 1.0;
        for (int i = 0; i < box.dim(); ++i) {
            const double axis = side - std::abs(h[i]);
            pairs = axis > 0.0 ? pairs * axis : 0.0;
        }
        if (pairs == 0.0) continue;
        total += autocovariance(coeffs, h) * (pairs / static_cast<double>(box.size()));
    }
    return total;
}

LongRunVariance sigma2(const MACoefficients& coeffs, const BoxFamily& family,
                       std::span<const int> n_grid) {
    if (coeffs.dim() != family.dim()) throw ArgumentError("sigma2: dimension mismatch");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ArgumentError("sigma2: n grid must be increasing");

    LongRunVariance out;
    for (int n : n_grid)
        out.partials.emplace_back(n, finite_window_second_moment(coeffs, family.box(n)));

    const double s = coeffs.coefficient_sum();
    out.closed_form = s * s;

    if (out.partials.size() >= 2) {
        // Partials approach the limit like 1/side; extrapolate linearly from
        // the last two grid points.
        const auto& [n1, p1] = out.partials[out.partials.size() - 2];
        const auto& [n2, p2] = out.partials[out.partials.size() - 1];
        const double x1 = 1.0 / static_cast<double>(family.box(n1).side_length());
        const double x2 = 1.0 / static_cast<double>(family.box(n2).side_length());
        out.extrapolated = (p1 * x2 - p2 * x1) / (x2 - x1);
    }
    return out;
}

SeparationCertificate separation_certificate(const MACoefficients& coeffs,
                                             const InnovationSpec& innov, const Box& box,
                                             std::span<const LatticePoint> tuple, int a,
                                             std::int64_t assignment_cap) {
    if (a < 0) throw ArgumentError("separation_certificate: negative radius");
    for (const auto& t : tuple)
        if (!box.contains(t))
            throw ArgumentError("separation_certificate: tuple point outside the box");

    SeparationCertificate cert;
    cert.tuple.assign(tuple.begin(), tuple.end());
    cert.radius = a;
    cert.partition = lattice_decomposition(tuple, a);

    cert.full_moment = exact_mixed_moment(coeffs, innov, tuple, assignment_cap).value;
    double product = 1.0;
    for (const auto& block : cert.partition.blocks()) {
        std::vector<LatticePoint> sub;
        sub.reserve(block.size());
        for (int i : block) sub.push_back(tuple[static_cast<std::size_t>(i - 1)]);
        product *= exact_mixed_moment(coeffs, innov, sub, assignment_cap).value;
    }
    cert.block_product = product;
    cert.lhs = std::abs(cert.full_moment - cert.block_product);

    const int k = static_cast<int>(tuple.size());
    const SeparationConstants constants = separation_constants(coeffs, innov, k);
    cert.c_k = constants.c_k;
    cert.gamma_a = constants.gamma(a);
    cert.rhs = cert.c_k * cert.gamma_a;
    cert.holds = cert.lhs <= cert.rhs + kCertificateSlack;
    return cert;
}

DecayBoundReport decay_bound_check(const MACoefficients& coeffs,
                                   std::span<const LatticePoint> points,
                                   std::span<const int> labels, int a, int ell) {
    if (points.empty()) throw ArgumentError("decay_bound_check: empty point list");
    if (points.size() != labels.size())
        throw ArgumentError("decay_bound_check: points and labels must align");
    if (a < 0) throw ArgumentError("decay_bound_check: negative radius");

    std::set<int> distinct(labels.begin(), labels.end());
    if (static_cast<int>(distinct.size()) != ell)
        throw ArgumentError("decay_bound_check: ell must equal the number of distinct labels");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (labels[i] != labels[j] && chebyshev(points[i], points[j]) <= a)
                throw ArgumentError(
                    "decay_bound_check: points in different groups must sit at distance > a");

    // lhs = sum_s prod_i |c_{t_i - s}|; the sum is finite because s must lie
    // in every shifted support.
    double lhs = 0.0;
    for (const auto& [s0, c0] : coeffs.entries()) {
        const LatticePoint s = points[0] - s0;
        double prod = std::abs(c0);
        bool alive = true;
        for (std::size_t i = 1; i < points.size(); ++i) {
            const double c = coeffs.at(points[i] - s);
            if (c == 0.0) {
                alive = false;
                break;
            }
            prod *= std::abs(c);
        }
        if (alive) lhs += prod;
    }

    DecayBoundReport report;
    report.lhs = lhs;
    report.ell = ell;
    report.block_size = static_cast<int>(points.size());
    report.rhs = ell * std::pow(coeffs.l1_norm(), static_cast<double>(points.size()) - ell + 1) *
                 std::pow(coeffs.gamma(a), ell - 1);
    report.holds = report.lhs <= report.rhs + kCertificateSlack;
    return report;
}

double moment_bound(const MACoefficients& coeffs, const InnovationSpec& innov, int k) {
    if (k < 1 || k > 12) throw ArgumentError("moment_bound: k outside 1..12");
    // Complete Bell polynomial over g_m = M'_m sum|c|^m with g_1 = 0 equals
    // the sum over partitions with all blocks of size >= 2 of prod_K g_{|K|}.
    std::vector<double> g(static_cast<std::size_t>(k) + 1, 0.0);
    for (int m = 2; m <= k; ++m) g[static_cast<std::size_t>(m)] = innov.moment_bound(m) * coeffs.power_sum(m);
    std::vector<double> bell(static_cast<std::size_t>(k) + 1, 0.0);
    bell[0] = 1.0;
    for (int j = 1; j <= k; ++j) {
        double acc = 0.0;
        double binom = 1.0; // C(j-1, i-1)
        for (int i = 1; i <= j; ++i) {
            acc += binom * g[static_cast<std::size_t>(i)] * bell[static_cast<std::size_t>(j - i)];
            binom = binom * (j - i) / i;
        }
        bell[static_cast<std::size_t>(j)] = acc;
    }
    return bell[static_cast<std::size_t>(k)];
}

SeparationConstants separation_constants(const MACoefficients& coeffs,
                                         const InnovationSpec& innov, int k) {
    if (k < 1 || k > 12) throw ArgumentError("separation_constants: k outside 1..12");
    SeparationConstants out;
    out.c_k = 2.0 * innov.moment_bound(k) * static_cast<double>(bell_number(k)) *
              std::pow(static_cast<double>(k), k) * std::pow(coeffs.l1_norm(), k);
    out.gamma = [coeffs](int a) { return coeffs.gamma(a); };
    return out;
}

double mixing_product_bound(double moment_cap, std::span<const double> alphas) {
    if (!(moment_cap >= 1.0)) throw ArgumentError("mixing_product_bound: moment cap must be >= 1");
    double sum = 0.0;
    for (double a : alphas) {
        if (a < 0.0 || a > 1.0)
            throw ArgumentError("mixing_product_bound: alpha outside [0, 1]");
        sum += std::sqrt(a);
    }
    return 24.0 * moment_cap * sum;
}

} // namespace cltlab
