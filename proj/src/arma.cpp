#include "cltlab/arma.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cltlab/errors.hpp"

namespace cltlab {

namespace {

constexpr int kMaxDegree = 12;

std::complex<double> evaluate(std::span<const double> coeffs, std::complex<double> z) {
    std::complex<double> v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * z + coeffs[j];
    return v;
}

std::complex<double> derivative_at(std::span<const double> coeffs, std::complex<double> z) {
    std::complex<double> v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 1;) v = v * z + static_cast<double>(j) * coeffs[j];
    return v;
}

// Expand prod_i (1 - z / roots[i]) into real coefficients, low to high.
std::vector<double> poly_from_inverse_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> acc{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
        const std::complex<double> inv = 1.0 / r;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] += acc[j];
            next[j + 1] -= acc[j] * inv;
        }
        acc = std::move(next);
    }
    std::vector<double> out(acc.size());
    for (std::size_t j = 0; j < acc.size(); ++j) {
        if (std::abs(acc[j].imag()) > 1e-9)
            throw NumericError("polynomial reconstruction left an imaginary residue");
        out[j] = acc[j].real();
    }
    return out;
}

// Convolution of complex sequences supported on [lo, lo+len).
struct Series {
    long long lo = 0;
    std::vector<std::complex<double>> c;
};

Series convolve(const Series& a, const Series& b) {
    Series out;
    out.lo = a.lo + b.lo;
    out.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] += a.c[i] * b.c[j];
    return out;
}

} // namespace

std::vector<double> ArmaModel::ar_poly() const {
    std::vector<double> p{1.0};
    p.insert(p.end(), ar.begin(), ar.end());
    return p;
}

std::vector<double> ArmaModel::ma_poly() const {
    std::vector<double> p{1.0};
    p.insert(p.end(), ma.begin(), ma.end());
    return p;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
    // Strip trailing (near-)zero coefficients; the scale is set by the largest one.
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) throw ArgumentError("polynomial_roots: zero polynomial");
    std::size_t degree = coeffs.size() - 1;
    while (degree > 0 && std::abs(coeffs[degree]) < 1e-14 * scale) --degree;
    if (degree == 0) return {};
    if (degree > kMaxDegree) throw SizeError("polynomial_roots: degree > " + std::to_string(kMaxDegree));

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<int>(degree), static_cast<int>(degree));
    const double lead = coeffs[degree];
    for (std::size_t j = 0; j < degree; ++j)
        companion(0, static_cast<int>(j)) = -coeffs[degree - 1 - j] / lead;
    for (std::size_t j = 1; j < degree; ++j)
        companion(static_cast<int>(j), static_cast<int>(j - 1)) = 1.0;

    // Parlett-Reinsch style balancing: scale row/column pairs by powers of two.
    for (int sweep = 0; sweep < 8; ++sweep) {
        bool changed = false;
        for (int i = 0; i < companion.rows(); ++i) {
            const double rn = companion.row(i).lpNorm<1>();
            const double cn = companion.col(i).lpNorm<1>();
            if (rn == 0.0 || cn == 0.0) continue;
            int exponent = 0;
            std::frexp(rn / cn, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double sc = std::ldexp(cn, exponent);
                const double sr = std::ldexp(rn, -exponent);
                if (sc + sr < 0.9 * (cn + rn)) {
                    changed = true;
                    companion.row(i) *= std::ldexp(1.0, -exponent);
                    companion.col(i) *= std::ldexp(1.0, exponent);
                }
            }
        }
        if (!changed) break;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericError("polynomial_roots: eigensolver failed");

    std::vector<std::complex<double>> roots(degree);
    std::span<const double> poly = coeffs.subspan(0, degree + 1);
    for (std::size_t j = 0; j < degree; ++j) {
        std::complex<double> z = solver.eigenvalues()(static_cast<int>(j));
        const std::complex<double> dp = derivative_at(poly, z);
        if (std::abs(dp) > 1e-30) z -= evaluate(poly, z) / dp; // one Newton polish step
        roots[j] = z;
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

ArmaModel arma_reduce(ArmaModel model, double root_tol) {
    if (!(root_tol > 0.0)) throw ArgumentError("arma_reduce: root_tol must be positive");
    if (model.ar.size() > kMaxDegree || model.ma.size() > kMaxDegree)
        throw SizeError("arma_reduce: polynomial degree > " + std::to_string(kMaxDegree));

    const std::vector<double> a_poly = model.ar_poly();
    const std::vector<double> b_poly = model.ma_poly();
    std::vector<std::complex<double>> a_roots = polynomial_roots(a_poly);
    std::vector<std::complex<double>> b_roots = polynomial_roots(b_poly);
    for (const auto& z : a_roots)
        if (std::abs(z) < root_tol)
            throw ModelError("arma_reduce: the autoregressive polynomial has a root at 0");

    // Greedily pair roots of A with unused roots of B within root_tol.
    std::vector<bool> b_used(b_roots.size(), false);
    std::vector<bool> a_removed(a_roots.size(), false);
    std::size_t removed = 0;
    for (std::size_t i = 0; i < a_roots.size(); ++i) {
        std::size_t best = b_roots.size();
        double best_dist = root_tol;
        for (std::size_t j = 0; j < b_roots.size(); ++j) {
            if (b_used[j]) continue;
            const double d = std::abs(a_roots[i] - b_roots[j]);
            if (d <= best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best < b_roots.size()) {
            b_used[best] = true;
            a_removed[i] = true;
            ++removed;
        }
    }

    if (removed == 0) {
        model.ar_reduced = a_poly;
        model.ma_reduced = b_poly;
        model.ar_roots = std::move(a_roots);
        model.reduced = true;
        return model;
    }

    std::vector<std::complex<double>> a_kept, b_kept;
    for (std::size_t i = 0; i < a_roots.size(); ++i)
        if (!a_removed[i]) a_kept.push_back(a_roots[i]);
    for (std::size_t j = 0; j < b_roots.size(); ++j)
        if (!b_used[j]) b_kept.push_back(b_roots[j]);

    // Constant terms are 1, so both polynomials factor as prod (1 - z/root).
    model.ar_reduced = poly_from_inverse_roots(a_kept);
    model.ma_reduced = poly_from_inverse_roots(b_kept);
    model.ar_roots = std::move(a_kept);
    model.reduced = true;
    return model;
}

MACoefficients arma_to_ma(const ArmaModel& model, double tol, double unit_circle_tol) {
    if (!model.reduced) throw ArgumentError("arma_to_ma: call arma_reduce first");
    if (!(tol > 0.0)) throw ArgumentError("arma_to_ma: tol must be positive");
    if (!(unit_circle_tol > 0.0)) throw ArgumentError("arma_to_ma: unit_circle_tol must be positive");

    for (const auto& z : model.ar_roots)
        if (std::abs(std::abs(z) - 1.0) < unit_circle_tol)
            throw ExistenceError(
                "arma_to_ma: the reduced autoregressive polynomial has a root with |z| = 1 "
                "(within tolerance); the recursion admits no MA(infinity) solution");

    // Start from the numerator polynomial, then divide out each linear factor
    // by convolving with its geometric expansion.
    Series acc;
    acc.lo = 0;
    acc.c.assign(model.ma_reduced.begin(), model.ma_reduced.end());

    const std::size_t nroots = model.ar_roots.size();
    double numer_l1 = 0.0;
    for (double c : model.ma_reduced) numer_l1 += std::abs(c);

    // Per-factor truncation budget: dropping the tail of one factor perturbs
    // the product by tail * prod(other factors' l1 norms) * |numerator|_1.
    std::vector<double> factor_norm(nroots);
    for (std::size_t i = 0; i < nroots; ++i) {
        const double m = std::abs(model.ar_roots[i]);
        const double ratio = m > 1.0 ? 1.0 / m : m;
        factor_norm[i] = 1.0 / (1.0 - ratio);
    }
    double norms_product = numer_l1;
    for (double f : factor_norm) norms_product *= f;

    for (std::size_t i = 0; i < nroots; ++i) {
        const std::complex<double> z0 = model.ar_roots[i];
        const double m = std::abs(z0);
        const double ratio = m > 1.0 ? 1.0 / m : m;
        const double others = norms_product / factor_norm[i];
        const double budget = 0.1 * tol / (static_cast<double>(nroots) * std::max(others, 1e-300));
        // Tail of the geometric series after L terms is ratio^L / (1 - ratio).
        long long len = 1;
        double tail = ratio / (1.0 - ratio);
        while (tail > budget && len < 100000) {
            tail *= ratio;
            ++len;
        }
        Series factor;
        if (m > 1.0) {
            // 1/(1 - z/z0) = sum_{j>=0} z0^{-j} z^j
            factor.lo = 0;
            factor.c.resize(static_cast<std::size_t>(len));
            std::complex<double> term = 1.0;
            const std::complex<double> inv = 1.0 / z0;
            for (long long j = 0; j < len; ++j) {
                factor.c[static_cast<std::size_t>(j)] = term;
                term *= inv;
            }
        } else {
            // 1/(1 - z/z0) = -sum_{j>=1} z0^j z^-j
            factor.lo = -len;
            factor.c.resize(static_cast<std::size_t>(len));
            std::complex<double> term = -z0;
            for (long long j = 1; j <= len; ++j) {
                factor.c[static_cast<std::size_t>(len - j)] = term;
                term *= z0;
            }
        }
        acc = convolve(acc, factor);
    }

    double max_imag = 0.0;
    for (const auto& v : acc.c) max_imag = std::max(max_imag, std::abs(v.imag()));
    if (max_imag > 1e-10)
        throw NumericError("arma_to_ma: imaginary residue " + std::to_string(max_imag) +
                           " above the 1e-10 noise floor");

    std::vector<double> real(acc.c.size());
    for (std::size_t j = 0; j < acc.c.size(); ++j) real[j] = acc.c[j].real();

    // Trim the outermost coefficients while their combined mass stays within
    // the remaining tolerance budget. A pure numerator is already exact.
    std::size_t first = 0, last = real.size();
    double trimmed = 0.0;
    if (nroots > 0) {
        double budget = 0.9 * tol;
        while (last - first > 1) {
            const double head = std::abs(real[first]);
            const double tail = std::abs(real[last - 1]);
            if (head <= tail && head <= budget) {
                budget -= head;
                trimmed += head;
                ++first;
            } else if (tail < head && tail <= budget) {
                budget -= tail;
                trimmed += tail;
                --last;
            } else {
                break;
            }
        }
    }

    std::vector<std::pair<LatticePoint, double>> entries;
    for (std::size_t j = first; j < last; ++j) {
        const long long lag = acc.lo + static_cast<long long>(j);
        if (real[j] != 0.0) entries.emplace_back(LatticePoint(static_cast<int>(lag)), real[j]);
    }
    const double certified = nroots > 0 ? trimmed + 0.1 * tol : 0.0;
    return MACoefficients(1, std::move(entries), certified, "arma");
}

} // namespace cltlab
