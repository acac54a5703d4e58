#include "cltlab/markov_chain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "cltlab/errors.hpp"
#include "cltlab/philox.hpp"

namespace cltlab {

namespace {

constexpr int kMaxStates = 16;

std::vector<std::vector<double>> matmul(const std::vector<std::vector<double>>& a,
                                        const std::vector<std::vector<double>>& b) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            const double v = a[i][l];
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) r[i][j] += v * b[l][j];
        }
    return r;
}

} // namespace

MarkovChain::MarkovChain(std::vector<std::vector<double>> transition,
                         std::optional<std::vector<double>> init,
                         std::optional<std::vector<double>> values)
    : transition_(std::move(transition)) {
    states_ = static_cast<int>(transition_.size());
    if (states_ < 1) throw ModelError("MarkovChain: empty transition matrix");
    if (states_ > kMaxStates)
        throw ModelError("MarkovChain: more than " + std::to_string(kMaxStates) + " states");
    for (const auto& row : transition_) {
        if (static_cast<int>(row.size()) != states_)
            throw ModelError("MarkovChain: transition matrix must be square");
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) throw ModelError("MarkovChain: negative transition probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ModelError("MarkovChain: row sums must equal 1 within 1e-12");
    }

    // Stationary distribution as the minimum-norm least-squares solution of
    // [P^T - I; 1^T] pi = [0; 1]; for chains with several stationary laws
    // (e.g. the identity matrix) this picks the uniform one.
    Eigen::MatrixXd sys(states_ + 1, states_);
    for (int j = 0; j < states_; ++j) {
        for (int i = 0; i < states_; ++i)
            sys(i, j) = transition_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                        (i == j ? 1.0 : 0.0);
        sys(states_, j) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(states_ + 1);
    rhs(states_) = 1.0;
    Eigen::VectorXd pi = sys.completeOrthogonalDecomposition().solve(rhs);
    stationary_.resize(static_cast<std::size_t>(states_));
    double norm = 0.0;
    for (int i = 0; i < states_; ++i) {
        if (pi(i) < -1e-9) throw ModelError("MarkovChain: failed to find a stationary distribution");
        stationary_[static_cast<std::size_t>(i)] = std::max(pi(i), 0.0);
        norm += stationary_[static_cast<std::size_t>(i)];
    }
    if (std::abs(norm - 1.0) > 1e-8)
        throw ModelError("MarkovChain: failed to normalize the stationary distribution");
    for (double& p : stationary_) p /= norm;

    // Damped power-iteration polish: (I + P)/2 shares the stationary laws of
    // P and is aperiodic, so this removes the least-squares rounding residue;
    // dyadic chains land on their stationary law exactly.
    std::vector<double> next(static_cast<std::size_t>(states_));
    for (int iter = 0; iter < 64; ++iter) {
        for (int j = 0; j < states_; ++j) {
            double v = 0.5 * stationary_[static_cast<std::size_t>(j)];
            for (int i = 0; i < states_; ++i)
                v += 0.5 * stationary_[static_cast<std::size_t>(i)] *
                     transition_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(j)] = v;
        }
        if (next == stationary_) break;
        stationary_ = next;
    }
    double residual = 0.0;
    for (int j = 0; j < states_; ++j) {
        double v = -stationary_[static_cast<std::size_t>(j)];
        for (int i = 0; i < states_; ++i)
            v += stationary_[static_cast<std::size_t>(i)] *
                 transition_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        residual = std::max(residual, std::abs(v));
    }
    if (residual > 1e-10) throw ModelError("MarkovChain: stationary distribution did not converge");

    if (init) {
        init_ = std::move(*init);
        if (static_cast<int>(init_.size()) != states_)
            throw ModelError("MarkovChain: init distribution has wrong size");
        double sum = 0.0;
        for (double p : init_) {
            if (p < 0.0) throw ModelError("MarkovChain: negative init probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw ModelError("MarkovChain: init must sum to 1");
    } else {
        init_ = stationary_;
    }

    if (values) {
        values_ = std::move(*values);
        if (static_cast<int>(values_.size()) != states_)
            throw ModelError("MarkovChain: state values have wrong size");
    } else {
        values_.resize(static_cast<std::size_t>(states_));
        for (int i = 0; i < states_; ++i) values_[static_cast<std::size_t>(i)] = i;
    }
}

const std::vector<std::vector<double>>& MarkovChain::power(long long d) const {
    if (d < 0) throw ArgumentError("MarkovChain::power: negative exponent");
    auto it = power_cache_.find(d);
    if (it != power_cache_.end()) return it->second;
    std::vector<std::vector<double>> result;
    if (d == 0) {
        result.assign(static_cast<std::size_t>(states_), std::vector<double>(static_cast<std::size_t>(states_), 0.0));
        for (int i = 0; i < states_; ++i) result[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    } else if (d == 1) {
        result = transition_;
    } else {
        const auto& half = power(d / 2);
        result = matmul(half, half);
        if (d % 2 == 1) result = matmul(result, transition_);
    }
    return power_cache_.emplace(d, std::move(result)).first->second;
}

std::vector<double> MarkovChain::distribution_at(long long t) const {
    const auto& p = power(t);
    std::vector<double> out(static_cast<std::size_t>(states_), 0.0);
    for (int i = 0; i < states_; ++i)
        for (int j = 0; j < states_; ++j)
            out[static_cast<std::size_t>(j)] +=
                init_[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

JointTable MarkovChain::joint_law(std::span<const long long> times) const {
    if (times.empty()) throw ArgumentError("joint_law: empty time list");
    std::vector<long long> sorted(times.begin(), times.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) throw ArgumentError("joint_law: duplicate time point");
    if (sorted.front() < 0) throw ArgumentError("joint_law: negative time");

    const int m = static_cast<int>(sorted.size());
    long long outcomes = 1;
    for (int i = 0; i < m; ++i) {
        outcomes *= states_;
        if (outcomes > 100'000'000) throw SizeError("joint_law: outcome table too large");
    }

    JointTable table;
    table.states = states_;
    table.times = sorted;
    table.probs.assign(static_cast<std::size_t>(outcomes), 0.0);

    const std::vector<double> first = distribution_at(sorted.front());
    std::vector<int> state(static_cast<std::size_t>(m), 0);
    for (long long idx = 0; idx < outcomes; ++idx) {
        long long rem = idx;
        for (int i = m - 1; i >= 0; --i) {
            state[static_cast<std::size_t>(i)] = static_cast<int>(rem % states_);
            rem /= states_;
        }
        double p = first[static_cast<std::size_t>(state[0])];
        for (int i = 0; i + 1 < m && p > 0.0; ++i) {
            const auto& step = power(sorted[static_cast<std::size_t>(i) + 1] - sorted[static_cast<std::size_t>(i)]);
            p *= step[static_cast<std::size_t>(state[static_cast<std::size_t>(i)])]
                     [static_cast<std::size_t>(state[static_cast<std::size_t>(i) + 1])];
        }
        table.probs[static_cast<std::size_t>(idx)] = p;
    }
    return table;
}

std::vector<double> MarkovChain::simulate_values(long long t_end, std::uint64_t seed) const {
    if (t_end < 0) throw ArgumentError("simulate_values: negative end time");
    std::vector<double> out(static_cast<std::size_t>(t_end) + 1);
    auto pick = [&](const std::vector<double>& dist, double u) {
        double acc = 0.0;
        for (int s = 0; s < states_; ++s) {
            acc += dist[static_cast<std::size_t>(s)];
            if (u < acc) return s;
        }
        return states_ - 1;
    };
    const auto block0 = philox_block(seed, static_cast<std::uint64_t>(0), 0x632c68617374ull);
    int state = pick(init_, u01(block0[0], block0[1]));
    out[0] = values_[static_cast<std::size_t>(state)];
    for (long long t = 1; t <= t_end; ++t) {
        const auto block = philox_block(seed, static_cast<std::uint64_t>(t), 0x632c68617374ull);
        state = pick(transition_[static_cast<std::size_t>(state)], u01(block[0], block[1]));
        out[static_cast<std::size_t>(t)] = values_[static_cast<std::size_t>(state)];
    }
    return out;
}

double MarkovChain::stationary_mean() const {
    double m = 0.0;
    for (int i = 0; i < states_; ++i)
        m += stationary_[static_cast<std::size_t>(i)] * values_[static_cast<std::size_t>(i)];
    return m;
}

double MarkovChain::long_run_variance() const {
    const double mean = stationary_mean();
    double var0 = 0.0;
    for (int i = 0; i < states_; ++i) {
        const double d = values_[static_cast<std::size_t>(i)] - mean;
        var0 += stationary_[static_cast<std::size_t>(i)] * d * d;
    }
    double total = var0;
    double prev_abs = var0 > 0 ? var0 : 1.0;
    int flat = 0;
    for (long long h = 1; h <= 100000; ++h) {
        const auto& ph = power(h);
        double cov = 0.0;
        for (int i = 0; i < states_; ++i)
            for (int j = 0; j < states_; ++j)
                cov += stationary_[static_cast<std::size_t>(i)] *
                       ph[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                       (values_[static_cast<std::size_t>(i)] - mean) *
                       (values_[static_cast<std::size_t>(j)] - mean);
        total += 2.0 * cov;
        if (std::abs(cov) < 1e-15 * std::max(prev_abs, 1.0)) {
            if (++flat >= 4) return total;
        } else {
            flat = 0;
        }
    }
    throw ModelError("long_run_variance: autocovariances do not decay (periodic or frozen chain?)");
}

} // namespace cltlab
