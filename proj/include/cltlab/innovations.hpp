#pragma once

#include <string>

#include "cltlab/philox.hpp"

namespace cltlab {

enum class InnovationKind { Rademacher, CenteredUniform, Gaussian, CenteredTwoPoint };

/// An innovation law: centered, unit variance, all moments finite. Provides
/// closed-form absolute and signed moments and deterministic sampling from a
/// pair of uniforms.
class InnovationSpec {
public:
    static InnovationSpec rademacher() { return InnovationSpec(InnovationKind::Rademacher, 0.5); }
    static InnovationSpec centered_uniform() { return InnovationSpec(InnovationKind::CenteredUniform, 0.0); }
    static InnovationSpec gaussian() { return InnovationSpec(InnovationKind::Gaussian, 0.0); }
    /// Two-point law: hits sqrt((1-p)/p) with probability p, else -sqrt(p/(1-p)).
    static InnovationSpec two_point(double p);

    InnovationKind kind() const { return kind_; }
    double hit_probability() const { return p_; }

    /// E|Y|^m, exact.
    double abs_moment(int m) const;
    /// E Y^m, exact (vanishes for odd m of symmetric laws).
    double signed_moment(int m) const;
    /// Moment bound M'_k; equals the exact k-th absolute moment.
    double moment_bound(int k) const { return abs_moment(k); }

    /// Deterministic draw from (u0 in [0,1), u1 in (0,1]).
    double sample(const UniformPair& u) const;

    std::string name() const;

private:
    InnovationSpec(InnovationKind k, double p);

    InnovationKind kind_;
    double p_;
    double hi_ = 0.0; // two-point support
    double lo_ = 0.0;
};

} // namespace cltlab
