#include <doctest.h>

#include <cmath>
#include <random>

#include "cltlab/clt_harness.hpp"
#include "cltlab/diagnostics.hpp"
#include "cltlab/moment_engine.hpp"
#include "cltlab/simulate.hpp"
#include "oracles.hpp"

using namespace cltlab;

namespace {

WindowSampler ma_sampler(const MACoefficients& coeffs, const InnovationSpec& innov) {
    return [coeffs, innov](const Box& box, std::uint64_t seed) {
        return simulate_ma_window(coeffs, innov, box, seed).values;
    };
}

} // namespace

TEST_SUITE("clt_harness") {

TEST_CASE("ks statistic on constructed samples") {
    // exact normal quantiles at (i - 0.5)/n: distance <= 1/(2n) + eps
    const int n = 1000;
    std::vector<double> quantiles;
    for (int i = 1; i <= n; ++i)
        quantiles.push_back(oracles::normal_quantile((i - 0.5) / n));
    CHECK(ks_statistic(quantiles, 1.0) <= 0.5 / n + 1e-6);

    // all samples at zero against the point mass
    CHECK(ks_statistic(std::vector<double>(50, 0.0), 0.0) == 0.0);

    // constant 5 against a unit normal: essentially Phi(5)
    const double d = ks_statistic(std::vector<double>(20, 5.0), 1.0);
    CHECK(d >= 0.999);
    CHECK(d <= 1.0);

    // point-mass target detects mass below zero
    CHECK(ks_statistic(std::vector<double>{-1.0, 0.0, 0.0, 0.0}, 0.0) == doctest::Approx(0.25));

    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, 1.0), ArgumentError);
    CHECK_THROWS_AS(ks_statistic(std::vector<double>{0.0}, -1.0), ArgumentError);
}

TEST_CASE("kolmogorov critical values") {
    // classical constants: K_{0.05} ~ 1.3581, K_{0.01} ~ 1.6276
    CHECK(kolmogorov_critical(0.05, 1) == doctest::Approx(1.3581).epsilon(1e-3));
    CHECK(kolmogorov_critical(0.01, 1) == doctest::Approx(1.6276).epsilon(1e-3));
    CHECK(kolmogorov_critical(0.01, 2000) == doctest::Approx(1.6276 / std::sqrt(2000.0)).epsilon(1e-3));
    // quantile property round-trip: KS of exact normal quantiles stays below
    // the 1% critical value by construction
    const int n = 500;
    std::vector<double> q;
    for (int i = 1; i <= n; ++i) q.push_back(oracles::normal_quantile((i - 0.5) / n));
    CHECK(ks_statistic(q, 1.0) <= kolmogorov_critical(0.01, n));
}

TEST_CASE("alpha from joint tables: independence, frozen chain, decay") {
    // i.i.d. coin: every event pair factorizes
    const MarkovChain coin({{0.5, 0.5}, {0.5, 0.5}});
    const AlphaResult indep =
        alpha_bruteforce(coin, std::vector<long long>{0, 1}, std::vector<long long>{4, 5});
    CHECK(indep.alpha == 0.0);
    CHECK(indep.exact);

    // frozen chain: perfectly dependent symmetric marginal gives 1/4
    const MarkovChain frozen({{1.0, 0.0}, {0.0, 1.0}});
    const AlphaResult stuck =
        alpha_bruteforce(frozen, std::vector<long long>{1}, std::vector<long long>{2});
    CHECK(stuck.alpha == doctest::Approx(0.25));

    // spectral-gap chain: alpha decays monotonically in the gap
    const MarkovChain sticky({{0.9, 0.1}, {0.2, 0.8}});
    const MixingProfile profile = alpha_profile(sticky, std::vector<long long>{0},
                                                std::vector<long long>{0},
                                                std::vector<int>{1, 2, 3, 4, 5});
    for (std::size_t i = 1; i < profile.rows.size(); ++i)
        CHECK(profile.rows[i].alpha <= profile.rows[i - 1].alpha + 1e-15);
    CHECK(profile.rows.front().alpha > 0.0);
    CHECK(profile.rows.back().alpha <= 0.25);

    CHECK_THROWS_AS(
        alpha_bruteforce(coin, std::vector<long long>{0, 1}, std::vector<long long>{1, 2}),
        ArgumentError); // overlap
    const MarkovChain big(std::vector<std::vector<double>>(4, {0.25, 0.25, 0.25, 0.25}));
    CHECK_THROWS_AS(
        alpha_bruteforce(big, std::vector<long long>{0, 1}, std::vector<long long>{5}),
        SizeError); // 4^2 > 12 outcomes on one side
}

TEST_CASE("alpha upper bound: no event pair can beat 1/4 on exact tables") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const double p = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
        const double q = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
        const MarkovChain chain({{p, 1.0 - p}, {1.0 - q, q}});
        const int d = 1 + static_cast<int>(rng() % 6);
        const AlphaResult r =
            alpha_bruteforce(chain, std::vector<long long>{0}, std::vector<long long>{d});
        CHECK(r.alpha <= 0.25 + 1e-12);
        CHECK(r.alpha >= 0.0);
    }
}

TEST_CASE("mixing product bound holds exactly on chains") {
    // independent coin windows: lhs is exactly zero
    const MarkovChain coin({{0.5, 0.5}, {0.5, 0.5}}, std::nullopt,
                           std::vector<double>{-1.0, 1.0});
    const MixingLemmaReport indep = verify_mixing_lemma(
        coin, {{0}, {2}, {4}});
    CHECK(indep.lhs == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(indep.holds);

    // sticky two-state chain at short gaps, k = 2 and 3, some windows of width 2
    const MarkovChain sticky({{0.9, 0.1}, {0.2, 0.8}}, std::nullopt,
                             std::vector<double>{-1.0, 1.0});
    for (const auto& windows : std::vector<std::vector<std::vector<long long>>>{
             {{0}, {1}}, {{0}, {3}}, {{0, 1}, {4, 5}}, {{0}, {2}, {4}}, {{0, 1}, {3}, {6, 7}}}) {
        const MixingLemmaReport r = verify_mixing_lemma(sticky, windows);
        CHECK(r.holds);
        CHECK(r.lhs >= 0.0);
        CHECK(r.moment_cap >= 1.0);
    }

    // frozen chain, k = 2: alpha = 1/4 so the bound is 24 * 1 * 1/2 = 12
    const MarkovChain frozen({{1.0, 0.0}, {0.0, 1.0}}, std::nullopt,
                             std::vector<double>{-1.0, 1.0});
    const MixingLemmaReport hard = verify_mixing_lemma(frozen, {{1}, {2}});
    CHECK(hard.rhs == doctest::Approx(12.0));
    CHECK(hard.lhs <= hard.rhs);
    CHECK(hard.holds);

    CHECK_THROWS_AS(verify_mixing_lemma(coin, {{3}, {1}}), ArgumentError); // unordered
}

TEST_CASE("mixing product bound on randomized two-state chains") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const double p = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
        const double q = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
        const double v = 0.5 + 2.0 * static_cast<double>(rng() % 1000) / 1000.0;
        const MarkovChain chain({{p, 1.0 - p}, {1.0 - q, q}}, std::nullopt,
                                std::vector<double>{-v, v});
        const int g1 = 1 + static_cast<int>(rng() % 4);
        const int g2 = 1 + static_cast<int>(rng() % 4);
        const bool triple = rng() % 2 == 0;
        std::vector<std::vector<long long>> windows;
        if (triple)
            windows = {{0}, {0 + g1}, {0 + g1 + g2}};
        else
            windows = {{0, 1}, {1 + g1, 2 + g1}};
        CHECK(verify_mixing_lemma(chain, windows).holds);
    }
}

TEST_CASE("clt runs are reproducible and insensitive to the worker count") {
    const MACoefficients coeffs =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-10);
    const InnovationSpec rad = InnovationSpec::rademacher();
    const BoxFamily line(1, false);

    CltOptions opt;
    opt.n_grid = {256};
    opt.replications = 400;
    opt.k_max = 6;
    opt.seed = 99;
    opt.workers = 1;

    const double s = coeffs.coefficient_sum();
    const CltReport one = run_clt_experiment(line, ma_sampler(coeffs, rad), s * s, opt);
    opt.workers = 3;
    const CltReport three = run_clt_experiment(line, ma_sampler(coeffs, rad), s * s, opt);
    REQUIRE(one.rows.size() == three.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        CHECK(one.rows[i].ks == three.rows[i].ks);
        CHECK(one.rows[i].max_abs_sum == three.rows[i].max_abs_sum);
        for (std::size_t m = 0; m < one.rows[i].moments.size(); ++m) {
            CHECK(one.rows[i].moments[m].value == three.rows[i].moments[m].value);
            CHECK(one.rows[i].moments[m].std_err == three.rows[i].moments[m].std_err);
        }
    }
}

TEST_CASE("empirical second moments track the exact finite-n value") {
    const MACoefficients coeffs =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-10);
    const InnovationSpec rad = InnovationSpec::rademacher();
    const BoxFamily line(1, false);

    CltOptions opt;
    opt.n_grid = {512};
    opt.replications = 600;
    opt.k_max = 2;
    opt.seed = 1234;
    opt.exact_second_moment = [&](int n) { return finite_window_second_moment(coeffs, line.box(n)); };

    const double s = coeffs.coefficient_sum();
    const CltReport report = run_clt_experiment(line, ma_sampler(coeffs, rad), s * s, opt);
    const CltRow& row = report.rows.back();
    const CltMomentRow& m2 = row.moments[1];
    CHECK(std::abs(m2.value - row.second_moment_exact) <= 4.0 * m2.std_err);
}

TEST_CASE("degenerate difference filter collapses to the boundary scale") {
    const MACoefficients diff = truncate_coefficients(
        CoefficientDescriptor::explicit_list(1, {{LatticePoint(0), 1.0}, {LatticePoint(1), -1.0}}),
        1e-9);
    const InnovationSpec rad = InnovationSpec::rademacher();
    const BoxFamily line(1, false);

    CltOptions opt;
    opt.n_grid = {100, 400};
    opt.replications = 300;
    opt.k_max = 4;
    opt.seed = 7;
    opt.exact_second_moment = [&](int n) { return finite_window_second_moment(diff, line.box(n)); };

    const CltReport report = run_clt_experiment(line, ma_sampler(diff, rad), 0.0, opt);
    CHECK(report.all_pass);
    for (const CltRow& row : report.rows) {
        CHECK(row.degenerate);
        // the window sum telescopes to (Y_n - Y_0): |S_n| <= 2/sqrt(n)
        CHECK(row.max_abs_sum <= 2.0 / std::sqrt(static_cast<double>(row.n)) + 1e-12);
        CHECK(row.second_moment_exact == doctest::Approx(2.0 / row.n));
    }
}

TEST_CASE("gaussian moments of an honest aggregate at moderate size") {
    const MACoefficients coeffs =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-10);
    const InnovationSpec rad = InnovationSpec::rademacher();
    const BoxFamily line(1, false);

    CltOptions opt;
    opt.n_grid = {1024};
    opt.replications = 800;
    opt.k_max = 6;
    opt.seed = 20240817;

    const double s = coeffs.coefficient_sum();
    const CltReport report = run_clt_experiment(line, ma_sampler(coeffs, rad), s * s, opt);
    CHECK(report.all_pass);
    CHECK(report.rows.back().ks <= report.rows.back().ks_critical);
}

TEST_CASE("space condition diagnostics on boxes") {
    const BoxFamily line(1, false);
    const std::vector<int> n_grid{8, 16, 32, 64, 128, 256};

    // geometric-style gamma: superpolynomial decay passes S1
    const auto gamma = [](int a) { return std::pow(2.0, -(a / 2)); };
    const ConditionDiagnostics d = space_condition_diagnostics(
        line, gamma, std::vector<int>{1, 3}, std::vector<int>{1, 2, 3}, n_grid);
    CHECK(!d.any_fail);
    for (const auto& row : d.rows) {
        INFO(row.condition, " ", row.params);
        if (row.condition == "S1" || row.condition == "S3" || row.condition == "S4")
            CHECK(row.verdict == "pass");
    }

    // polynomially decaying gamma fails the S1 trend for k = 3
    const auto slow = [](int a) { return 1.0 / (1.0 + a); };
    const ConditionDiagnostics bad = space_condition_diagnostics(
        line, slow, std::vector<int>{3}, std::vector<int>{1}, n_grid);
    bool found_indeterminate = false;
    for (const auto& row : bad.rows)
        if (row.condition == "S1") found_indeterminate = row.verdict != "pass";
    CHECK(found_indeterminate);
}

TEST_CASE("s4 band on centered grids matches the known ratio scale") {
    const BoxFamily plane(2, true);
    const std::vector<int> n_grid{100, 316, 1000, 3162, 10000, 31623, 100000};
    const ConditionDiagnostics d = space_condition_diagnostics(
        plane, [](int) { return 0.0; }, std::vector<int>{1}, std::vector<int>{2}, n_grid);
    for (const auto& row : d.rows)
        if (row.condition == "S4") {
            CHECK(row.verdict == "pass");
            // ratio tends to 2^{d(ell-1)} = 4 for d = 2, ell = 2
            CHECK(row.grid.back().second == doctest::Approx(4.0).epsilon(0.05));
        }
}

TEST_CASE("moment condition diagnostics") {
    const MACoefficients coeffs =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-10);
    const ConditionDiagnostics d = moment_condition_diagnostics(
        coeffs, InnovationSpec::rademacher(), std::vector<int>{2, 4, 6}, std::vector<int>{10, 100});
    CHECK(!d.any_fail);
    for (const auto& row : d.rows) CHECK((row.verdict == "pass" || row.verdict == "indeterminate"));
}

} // TEST_SUITE
