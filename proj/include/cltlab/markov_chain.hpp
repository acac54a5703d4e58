#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace cltlab {

/// Exact joint distribution of a finite-state process restricted to a list of
/// time points. Outcomes are row-major over the state tuple (first time
/// slowest), probs[outcome] their probabilities.
struct JointTable {
    int states = 0;
    std::vector<long long> times;
    std::vector<double> probs;

    long long outcomes() const { return static_cast<long long>(probs.size()); }
};

/// Time-homogeneous finite-state Markov chain on times 0, 1, 2, ... with an
/// exactly computable joint law on finite windows.
class MarkovChain {
public:
    /// transition rows must sum to 1 within 1e-12; at most 16 states.
    /// init: distribution at time 0; defaults to the stationary distribution.
    /// values: real value attached to each state; defaults to 0, 1, ...
    MarkovChain(std::vector<std::vector<double>> transition,
                std::optional<std::vector<double>> init = std::nullopt,
                std::optional<std::vector<double>> values = std::nullopt);

    int states() const { return states_; }
    const std::vector<double>& initial() const { return init_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::vector<double>>& transition() const { return transition_; }

    /// State distribution at time t (init * P^t).
    std::vector<double> distribution_at(long long t) const;

    /// d-step transition matrix P^d.
    const std::vector<std::vector<double>>& power(long long d) const;

    /// Exact joint law of the states at the given (not necessarily sorted,
    /// duplicate-free) times; outcomes ordered by the sorted times.
    JointTable joint_law(std::span<const long long> times) const;

    /// Deterministic sample path of state values at times 0..t_end.
    std::vector<double> simulate_values(long long t_end, std::uint64_t seed) const;

    /// Long-run variance of the value process started from the stationary
    /// law: var(f) + 2 sum_{h>=1} cov_h, summed until the geometric tail is
    /// negligible. Requires centered values under the stationary law.
    double long_run_variance() const;

    /// E f(X_0) under the stationary law.
    double stationary_mean() const;

    const std::vector<double>& stationary() const { return stationary_; }

private:
    int states_;
    std::vector<std::vector<double>> transition_;
    std::vector<double> init_;
    std::vector<double> values_;
    std::vector<double> stationary_;
    mutable std::map<long long, std::vector<std::vector<double>>> power_cache_;
};

} // namespace cltlab
