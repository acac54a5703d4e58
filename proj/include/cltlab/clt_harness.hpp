#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cltlab/index_spaces.hpp"
#include "cltlab/markov_chain.hpp"

namespace cltlab {

/// Normal CDF with variance sigma2 (point mass at 0 when sigma2 == 0).
double normal_cdf(double x, double sigma2);

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
/// samples and N(0, sigma2); the step at 0 when sigma2 == 0.
double ks_statistic(std::vector<double> samples, double sigma2);

/// Asymptotic Kolmogorov critical value at the given level for n samples
/// (K_alpha / sqrt(n), with Q(K_alpha) = alpha solved numerically).
double kolmogorov_critical(double alpha, int n);

/// Produces one realization of the process on the box; must be a pure
/// function of (box, seed).
using WindowSampler = std::function<std::vector<double>(const Box&, std::uint64_t)>;

struct CltMomentRow {
    int k = 0;
    double value = 0.0;   ///< empirical moment of the normalized sum
    double target = 0.0;  ///< (k-1)!! sigma^k for even k, 0 for odd k
    double std_err = 0.0; ///< standard error of the empirical moment
    bool asserted = false;
    bool pass = true;
};

struct CltRow {
    int n = 0;
    long long points = 0;
    int replications = 0;
    std::uint64_t seed = 0; ///< the per-(n, attempt) derived seed
    int attempt = 0;
    std::vector<CltMomentRow> moments;
    double ks = 0.0;
    double ks_critical = 0.0;
    double max_abs_sum = 0.0;
    double second_moment_exact = 0.0; ///< exact finite-n E S_n^2 when supplied
    bool degenerate = false;
    bool pass = true;
    double wall_seconds = 0.0;
};

struct CltReport {
    double sigma2_value = 0.0;
    std::vector<CltRow> rows; ///< every attempt, in run order
    bool all_pass = true;
};

struct CltOptions {
    std::vector<int> n_grid;
    int replications = 1000;
    int k_max = 6;
    std::uint64_t seed = 0;
    int workers = 1;
    int max_attempts = 2;     ///< one retry with a derived seed bounds the flake rate
    double ks_alpha = 0.01;
    double se_multiplier = 4.0;
    double even_moment_rel_slack = 0.15;
    int k_assert_max = 6; ///< moments above this are reported, never asserted
    /// Exact finite-n second moment per n, used for the degenerate case.
    std::function<double(int)> exact_second_moment;
};

/// Monte Carlo moments of S_n = |T_n|^{-1/2} sum_t X_t against the Gaussian
/// targets, with a KS distance per n. Deterministic for fixed options,
/// including the worker count.
CltReport run_clt_experiment(const BoxFamily& family, const WindowSampler& sampler,
                             double sigma2_value, const CltOptions& options);

/// alpha over one window pair from an exact joint distribution: the maximum
/// of |P(A and B) - P(A) P(B)| over all event pairs. This is a lower bound
/// for the process-level coefficient, restricted to the chosen windows.
struct AlphaResult {
    double alpha = 0.0;
    long long event_pairs = 0;
    bool exact = true;
};

AlphaResult alpha_bruteforce(const MarkovChain& chain, std::span<const long long> window_i,
                             std::span<const long long> window_j,
                             long long event_cap = 1LL << 26);

/// Core of the brute force: joint[u * v_count + v] = P(proj_I = u, proj_J = v).
double alpha_from_joint(int u_count, int v_count, const std::vector<double>& joint);

struct MixingProfileRow {
    int d = 0;
    double alpha = 0.0;
};

struct MixingProfile {
    std::vector<long long> base_window;
    std::vector<long long> probe_shape;
    std::vector<MixingProfileRow> rows; ///< per gap d
};

/// alpha between the base window and the probe shape shifted d past its end,
/// for each d in the list.
MixingProfile alpha_profile(const MarkovChain& chain, std::span<const long long> base_window,
                            std::span<const long long> probe_shape, std::span<const int> d_list);

struct MixingLemmaReport {
    double lhs = 0.0; ///< |E Y_1...Y_k - prod E Y_l| exactly
    double rhs = 0.0; ///< 24 M sum sqrt(alpha)
    double moment_cap = 0.0;
    std::vector<int> gaps;
    std::vector<double> alphas; ///< exact alpha of each telescoping split
    bool holds = false;
};

/// Exact verification of the mixing product bound on a finite chain. The
/// variables Y_l are the products of state values over each window; the
/// alpha for the l-th telescoping step is computed between the union of the
/// first l windows and window l+1, the sigma-algebra pair the bound uses.
MixingLemmaReport verify_mixing_lemma(const MarkovChain& chain,
                                      const std::vector<std::vector<long long>>& windows,
                                      long long event_cap = 1LL << 26);

} // namespace cltlab
