#include "cltlab/clt_harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "cltlab/errors.hpp"
#include "cltlab/moment_engine.hpp"
#include "cltlab/partitions.hpp"
#include "cltlab/philox.hpp"

namespace cltlab {

double normal_cdf(double x, double sigma2) {
    if (sigma2 < 0.0) throw ArgumentError("normal_cdf: negative variance");
    if (sigma2 == 0.0) return x >= 0.0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * sigma2));
}

double ks_statistic(std::vector<double> samples, double sigma2) {
    if (samples.empty()) throw ArgumentError("ks_statistic: no samples");
    if (sigma2 < 0.0) throw ArgumentError("ks_statistic: negative variance");
    const double n = static_cast<double>(samples.size());
    if (sigma2 == 0.0) {
        // Target is the step at 0; the sup is reached just left or right of
        // the jump: the sample mass strictly below zero or strictly above.
        double below = 0.0, above = 0.0;
        for (double s : samples) {
            if (s < 0.0) below += 1.0;
            if (s > 0.0) above += 1.0;
        }
        return std::max(below, above) / n;
    }
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = normal_cdf(samples[i], sigma2);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return std::min(d, 1.0);
}

double kolmogorov_critical(double alpha, int n) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("kolmogorov_critical: level outside (0,1)");
    if (n < 1) throw ArgumentError("kolmogorov_critical: n must be positive");
    auto survival = [](double lambda) {
        double q = 0.0;
        for (int j = 1; j <= 100; ++j) {
            const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
            q += (j % 2 == 1 ? term : -term);
        }
        return q;
    };
    double lo = 0.2, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (survival(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

namespace {

struct MomentStats {
    double mean = 0.0;
    double std_err = 0.0;
};

MomentStats power_mean(const std::vector<double>& samples, int k) {
    const double r = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += std::pow(s, k);
    mean /= r;
    double ss = 0.0;
    for (double s : samples) {
        const double d = std::pow(s, k) - mean;
        ss += d * d;
    }
    const double se = samples.size() > 1 ? std::sqrt(ss / (r * (r - 1.0))) : 0.0;
    return {mean, se};
}

CltRow run_single_pass(const BoxFamily& family, const WindowSampler& sampler,
                       double sigma2_value, const CltOptions& opt, int n, int attempt,
                       std::uint64_t pass_seed) {
    const auto start = std::chrono::steady_clock::now();
    const Box box = family.box(n);
    const long long points = box.size();
    const double norm = 1.0 / std::sqrt(static_cast<double>(points));
    const int r = opt.replications;

    // Replications are independent work items keyed by their index, so any
    // worker count yields identical samples.
    std::vector<double> samples(static_cast<std::size_t>(r), 0.0);
    const int workers = std::max(1, opt.workers);
    auto work = [&](int from, int to) {
        for (int rep = from; rep < to; ++rep) {
            const std::uint64_t rep_seed = derive_seed(pass_seed, static_cast<std::uint64_t>(rep), 0x726570ull);
            const std::vector<double> values = sampler(box, rep_seed);
            double sum = 0.0;
            for (double v : values) sum += v;
            samples[static_cast<std::size_t>(rep)] = sum * norm;
        }
    };
    if (workers == 1) {
        work(0, r);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (r + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int from = w * chunk;
            const int to = std::min(r, from + chunk);
            if (from < to) pool.emplace_back(work, from, to);
        }
        for (auto& t : pool) t.join();
    }

    CltRow row;
    row.n = n;
    row.points = points;
    row.replications = r;
    row.seed = pass_seed;
    row.attempt = attempt;
    row.degenerate = sigma2_value == 0.0;
    row.ks_critical = kolmogorov_critical(opt.ks_alpha, r);
    row.ks = ks_statistic(samples, sigma2_value);
    for (double s : samples) row.max_abs_sum = std::max(row.max_abs_sum, std::abs(s));
    if (opt.exact_second_moment) row.second_moment_exact = opt.exact_second_moment(n);

    const double sigma = std::sqrt(sigma2_value);
    bool pass = true;
    for (int k = 1; k <= opt.k_max; ++k) {
        CltMomentRow m;
        m.k = k;
        const MomentStats stats = power_mean(samples, k);
        m.value = stats.mean;
        m.std_err = stats.std_err;
        m.target = k % 2 == 0
                       ? static_cast<double>(double_factorial(k - 1)) * std::pow(sigma, k)
                       : 0.0;
        m.asserted = k <= opt.k_assert_max;
        if (row.degenerate) {
            // The limit is the point mass at 0; the honest finite-n target for
            // the second moment is its exact value, everything else is
            // reported only.
            if (k == 2 && opt.exact_second_moment) {
                m.target = row.second_moment_exact;
                m.pass = std::abs(m.value - m.target) <= opt.se_multiplier * m.std_err;
            } else {
                m.asserted = false;
            }
        } else if (m.asserted) {
            const double band = k % 2 == 0
                                    ? std::max(opt.se_multiplier * m.std_err,
                                               opt.even_moment_rel_slack * m.target)
                                    : opt.se_multiplier * m.std_err;
            m.pass = std::abs(m.value - m.target) <= band;
        }
        pass = pass && (!m.asserted || m.pass);
        row.moments.push_back(m);
    }
    if (!row.degenerate) pass = pass && row.ks <= row.ks_critical;
    row.pass = pass;
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace

CltReport run_clt_experiment(const BoxFamily& family, const WindowSampler& sampler,
                             double sigma2_value, const CltOptions& opt) {
    if (opt.n_grid.empty()) throw ArgumentError("run_clt_experiment: empty n grid");
    if (opt.replications < 100) throw ArgumentError("run_clt_experiment: need at least 100 replications");
    if (opt.k_max < 1 || opt.k_max > 8) throw ArgumentError("run_clt_experiment: k_max outside 1..8");
    if (sigma2_value < 0.0) throw ConfigError("run_clt_experiment: negative sigma2");

    CltReport report;
    report.sigma2_value = sigma2_value;
    for (int n : opt.n_grid) {
        bool n_passed = false;
        for (int attempt = 0; attempt < std::max(1, opt.max_attempts); ++attempt) {
            const std::uint64_t pass_seed =
                derive_seed(opt.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(attempt));
            CltRow row = run_single_pass(family, sampler, sigma2_value, opt, n, attempt, pass_seed);
            n_passed = row.pass;
            report.rows.push_back(std::move(row));
            if (n_passed) break;
        }
        report.all_pass = report.all_pass && n_passed;
    }
    return report;
}

double alpha_from_joint(int u_count, int v_count, const std::vector<double>& joint) {
    if (u_count < 1 || v_count < 1 || joint.size() != static_cast<std::size_t>(u_count) * static_cast<std::size_t>(v_count))
        throw ArgumentError("alpha_from_joint: malformed joint table");
    if (u_count > 12 || v_count > 12) throw SizeError("alpha_from_joint: marginal outcome count > 12");

    std::vector<double> p_u(static_cast<std::size_t>(u_count), 0.0);
    std::vector<double> p_v(static_cast<std::size_t>(v_count), 0.0);
    for (int u = 0; u < u_count; ++u)
        for (int v = 0; v < v_count; ++v) {
            const double p = joint[static_cast<std::size_t>(u) * static_cast<std::size_t>(v_count) + static_cast<std::size_t>(v)];
            p_u[static_cast<std::size_t>(u)] += p;
            p_v[static_cast<std::size_t>(v)] += p;
        }

    const long long a_events = 1LL << u_count;
    const long long b_events = 1LL << v_count;
    std::vector<double> row_mass(static_cast<std::size_t>(v_count));
    std::vector<double> subset_joint(static_cast<std::size_t>(b_events));
    std::vector<double> subset_pv(static_cast<std::size_t>(b_events), 0.0);
    for (long long b = 1; b < b_events; ++b) {
        const int bit = std::countr_zero(static_cast<unsigned long long>(b));
        subset_pv[static_cast<std::size_t>(b)] =
            subset_pv[static_cast<std::size_t>(b & (b - 1))] + p_v[static_cast<std::size_t>(bit)];
    }

    double best = 0.0;
    for (long long a = 0; a < a_events; ++a) {
        double pa = 0.0;
        std::fill(row_mass.begin(), row_mass.end(), 0.0);
        for (int u = 0; u < u_count; ++u)
            if (a >> u & 1) {
                pa += p_u[static_cast<std::size_t>(u)];
                for (int v = 0; v < v_count; ++v)
                    row_mass[static_cast<std::size_t>(v)] +=
                        joint[static_cast<std::size_t>(u) * static_cast<std::size_t>(v_count) + static_cast<std::size_t>(v)];
            }
        subset_joint[0] = 0.0;
        for (long long b = 1; b < b_events; ++b) {
            const int bit = std::countr_zero(static_cast<unsigned long long>(b));
            subset_joint[static_cast<std::size_t>(b)] =
                subset_joint[static_cast<std::size_t>(b & (b - 1))] + row_mass[static_cast<std::size_t>(bit)];
        }
        for (long long b = 0; b < b_events; ++b)
            best = std::max(best, std::abs(subset_joint[static_cast<std::size_t>(b)] -
                                           pa * subset_pv[static_cast<std::size_t>(b)]));
    }
    return best;
}

AlphaResult alpha_bruteforce(const MarkovChain& chain, std::span<const long long> window_i,
                             std::span<const long long> window_j, long long event_cap) {
    if (window_i.empty() || window_j.empty())
        throw ArgumentError("alpha_bruteforce: windows must be nonempty");
    {
        std::set<long long> seen(window_i.begin(), window_i.end());
        for (long long t : window_j)
            if (!seen.insert(t).second)
                throw ArgumentError("alpha_bruteforce: windows overlap");
    }

    long long u_count = 1, v_count = 1;
    for (std::size_t i = 0; i < window_i.size(); ++i) {
        u_count *= chain.states();
        if (u_count > 12) throw SizeError("alpha_bruteforce: states^|I| exceeds 12");
    }
    for (std::size_t i = 0; i < window_j.size(); ++i) {
        v_count *= chain.states();
        if (v_count > 12) throw SizeError("alpha_bruteforce: states^|J| exceeds 12");
    }
    const long long pairs = (1LL << u_count) * (1LL << v_count);
    if (pairs > event_cap)
        throw SizeError("alpha_bruteforce: event pair count exceeds the cap");

    // Joint law over the union, then marginalize onto (proj_I, proj_J).
    std::vector<long long> all(window_i.begin(), window_i.end());
    all.insert(all.end(), window_j.begin(), window_j.end());
    const JointTable table = chain.joint_law(all);

    // Position of each window time inside the sorted union.
    std::vector<long long> sorted = table.times;
    auto position = [&](long long t) {
        return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    };
    std::vector<int> pos_i, pos_j;
    for (long long t : window_i) pos_i.push_back(position(t));
    for (long long t : window_j) pos_j.push_back(position(t));

    const int m = static_cast<int>(sorted.size());
    std::vector<double> joint(static_cast<std::size_t>(u_count * v_count), 0.0);
    std::vector<int> state(static_cast<std::size_t>(m));
    for (long long idx = 0; idx < table.outcomes(); ++idx) {
        long long rem = idx;
        for (int i = m - 1; i >= 0; --i) {
            state[static_cast<std::size_t>(i)] = static_cast<int>(rem % chain.states());
            rem /= chain.states();
        }
        long long u = 0, v = 0;
        for (int p : pos_i) u = u * chain.states() + state[static_cast<std::size_t>(p)];
        for (int p : pos_j) v = v * chain.states() + state[static_cast<std::size_t>(p)];
        joint[static_cast<std::size_t>(u * v_count + v)] += table.probs[static_cast<std::size_t>(idx)];
    }

    AlphaResult result;
    result.alpha = alpha_from_joint(static_cast<int>(u_count), static_cast<int>(v_count), joint);
    result.event_pairs = pairs;
    result.exact = true;
    return result;
}

MixingProfile alpha_profile(const MarkovChain& chain, std::span<const long long> base_window,
                            std::span<const long long> probe_shape, std::span<const int> d_list) {
    if (base_window.empty() || probe_shape.empty())
        throw ArgumentError("alpha_profile: windows must be nonempty");
    MixingProfile profile;
    profile.base_window.assign(base_window.begin(), base_window.end());
    profile.probe_shape.assign(probe_shape.begin(), probe_shape.end());
    const long long base_end = *std::max_element(base_window.begin(), base_window.end());
    for (int d : d_list) {
        if (d < 1) throw ArgumentError("alpha_profile: gaps must be >= 1");
        std::vector<long long> probe;
        for (long long offset : probe_shape) probe.push_back(base_end + d + offset);
        profile.rows.push_back({d, alpha_bruteforce(chain, base_window, probe).alpha});
    }
    return profile;
}

MixingLemmaReport verify_mixing_lemma(const MarkovChain& chain,
                                      const std::vector<std::vector<long long>>& windows,
                                      long long event_cap) {
    const int k = static_cast<int>(windows.size());
    if (k < 2) throw ArgumentError("verify_mixing_lemma: need at least two windows");
    for (int l = 0; l + 1 < k; ++l) {
        const long long hi = *std::max_element(windows[static_cast<std::size_t>(l)].begin(),
                                               windows[static_cast<std::size_t>(l)].end());
        const long long lo = *std::min_element(windows[static_cast<std::size_t>(l) + 1].begin(),
                                               windows[static_cast<std::size_t>(l) + 1].end());
        if (hi >= lo) throw ArgumentError("verify_mixing_lemma: windows must be strictly ordered");
    }

    // Y_l = product of state values over window l; all expectations from the
    // exact joint law over the union of the windows.
    std::vector<long long> all;
    std::vector<std::vector<int>> positions(static_cast<std::size_t>(k));
    for (const auto& w : windows) all.insert(all.end(), w.begin(), w.end());
    const JointTable table = chain.joint_law(all);
    for (int l = 0; l < k; ++l)
        for (long long t : windows[static_cast<std::size_t>(l)])
            positions[static_cast<std::size_t>(l)].push_back(static_cast<int>(
                std::lower_bound(table.times.begin(), table.times.end(), t) - table.times.begin()));

    const int m = static_cast<int>(table.times.size());
    const int exponent = 4 * (k - 1);
    std::vector<double> y(static_cast<std::size_t>(k));
    double product_mean = 0.0;
    std::vector<double> means(static_cast<std::size_t>(k), 0.0);
    std::vector<double> abs_power(static_cast<std::size_t>(k), 0.0);
    std::vector<int> state(static_cast<std::size_t>(m));
    for (long long idx = 0; idx < table.outcomes(); ++idx) {
        long long rem = idx;
        for (int i = m - 1; i >= 0; --i) {
            state[static_cast<std::size_t>(i)] = static_cast<int>(rem % chain.states());
            rem /= chain.states();
        }
        const double p = table.probs[static_cast<std::size_t>(idx)];
        double prod_all = 1.0;
        for (int l = 0; l < k; ++l) {
            double w = 1.0;
            for (int pos : positions[static_cast<std::size_t>(l)])
                w *= chain.values()[static_cast<std::size_t>(state[static_cast<std::size_t>(pos)])];
            y[static_cast<std::size_t>(l)] = w;
            prod_all *= w;
        }
        product_mean += p * prod_all;
        for (int l = 0; l < k; ++l) {
            means[static_cast<std::size_t>(l)] += p * y[static_cast<std::size_t>(l)];
            abs_power[static_cast<std::size_t>(l)] +=
                p * std::pow(std::abs(y[static_cast<std::size_t>(l)]), exponent);
        }
    }

    MixingLemmaReport report;
    double mean_product = 1.0;
    for (int l = 0; l < k; ++l) mean_product *= means[static_cast<std::size_t>(l)];
    report.lhs = std::abs(product_mean - mean_product);
    report.moment_cap = 1.0;
    for (double a : abs_power) report.moment_cap = std::max(report.moment_cap, a);

    // alpha of each telescoping split: the first l windows against window l+1.
    std::vector<long long> left;
    for (int l = 0; l + 1 < k; ++l) {
        left.insert(left.end(), windows[static_cast<std::size_t>(l)].begin(),
                    windows[static_cast<std::size_t>(l)].end());
        const long long gap_lo = *std::max_element(windows[static_cast<std::size_t>(l)].begin(),
                                                   windows[static_cast<std::size_t>(l)].end());
        const long long gap_hi = *std::min_element(windows[static_cast<std::size_t>(l) + 1].begin(),
                                                   windows[static_cast<std::size_t>(l) + 1].end());
        report.gaps.push_back(static_cast<int>(gap_hi - gap_lo));
        report.alphas.push_back(
            alpha_bruteforce(chain, left, windows[static_cast<std::size_t>(l) + 1], event_cap).alpha);
    }
    report.rhs = mixing_product_bound(report.moment_cap, report.alphas);
    report.holds = report.lhs <= report.rhs + 1e-12;
    return report;
}

} // namespace cltlab
