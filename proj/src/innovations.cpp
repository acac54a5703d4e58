#include "cltlab/innovations.hpp"

#include <cmath>
#include <numbers>

#include "cltlab/errors.hpp"
#include "cltlab/partitions.hpp"

namespace cltlab {

InnovationSpec InnovationSpec::two_point(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("two_point: p must lie in (0, 1)");
    return InnovationSpec(InnovationKind::CenteredTwoPoint, p);
}

InnovationSpec::InnovationSpec(InnovationKind k, double p) : kind_(k), p_(p) {
    if (kind_ == InnovationKind::Rademacher) {
        hi_ = 1.0;
        lo_ = -1.0;
    } else if (kind_ == InnovationKind::CenteredTwoPoint) {
        hi_ = std::sqrt((1.0 - p_) / p_);
        lo_ = -std::sqrt(p_ / (1.0 - p_));
    }
}

double InnovationSpec::abs_moment(int m) const {
    if (m < 0) throw ArgumentError("abs_moment: negative order");
    if (m == 0) return 1.0;
    switch (kind_) {
    case InnovationKind::Rademacher:
        return 1.0;
    case InnovationKind::CenteredTwoPoint:
        return std::pow(hi_, m) * p_ + std::pow(-lo_, m) * (1.0 - p_);
    case InnovationKind::CenteredUniform:
        // |Y| uniform moments on [0, sqrt(3)] scaled: E|Y|^m = 3^{m/2}/(m+1).
        return std::pow(std::sqrt(3.0), m) / (m + 1);
    case InnovationKind::Gaussian:
        // E|Z|^m = 2^{m/2} Gamma((m+1)/2) / sqrt(pi)
        return std::pow(2.0, 0.5 * m) * std::tgamma(0.5 * (m + 1)) / std::sqrt(std::numbers::pi);
    }
    throw ArgumentError("abs_moment: unknown innovation kind");
}

double InnovationSpec::signed_moment(int m) const {
    if (m < 0) throw ArgumentError("signed_moment: negative order");
    if (m == 0) return 1.0;
    switch (kind_) {
    case InnovationKind::Rademacher:
        return m % 2 == 0 ? 1.0 : 0.0;
    case InnovationKind::CenteredTwoPoint:
        return std::pow(hi_, m) * p_ + std::pow(lo_, m) * (1.0 - p_);
    case InnovationKind::CenteredUniform:
        return m % 2 == 0 ? abs_moment(m) : 0.0;
    case InnovationKind::Gaussian:
        return m % 2 == 0 ? static_cast<double>(double_factorial(m - 1)) : 0.0;
    }
    throw ArgumentError("signed_moment: unknown innovation kind");
}

double InnovationSpec::sample(const UniformPair& u) const {
    switch (kind_) {
    case InnovationKind::Rademacher:
        return u.u0 < 0.5 ? -1.0 : 1.0;
    case InnovationKind::CenteredTwoPoint:
        return u.u0 < p_ ? hi_ : lo_;
    case InnovationKind::CenteredUniform:
        return (2.0 * u.u0 - 1.0) * std::sqrt(3.0);
    case InnovationKind::Gaussian:
        // Box-Muller; u1 > 0 by construction.
        return std::sqrt(-2.0 * std::log(u.u1)) * std::cos(2.0 * std::numbers::pi * u.u0);
    }
    throw ArgumentError("sample: unknown innovation kind");
}

std::string InnovationSpec::name() const {
    switch (kind_) {
    case InnovationKind::Rademacher: return "rademacher";
    case InnovationKind::CenteredTwoPoint: return "two_point(p=" + std::to_string(p_) + ")";
    case InnovationKind::CenteredUniform: return "centered_uniform";
    case InnovationKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

} // namespace cltlab
