#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "cltlab/arma.hpp"
#include "cltlab/digit_process.hpp"
#include "cltlab/markov_chain.hpp"
#include "cltlab/simulate.hpp"
#include "oracles.hpp"

using namespace cltlab;

namespace {

// l1 distance between two lag-indexed coefficient maps.
double conv_distance(const std::map<int, double>& a, const std::map<int, double>& b) {
    double d = 0.0;
    std::map<int, double> diff = a;
    for (const auto& [lag, v] : b) diff[lag] -= v;
    for (const auto& [lag, v] : diff) d += std::abs(v);
    return d;
}

std::map<int, double> convolve_with_ar(const std::vector<double>& ar, const MACoefficients& c) {
    std::map<int, double> out;
    for (const auto& [s, v] : c.entries()) {
        out[s[0]] += v;
        for (std::size_t i = 0; i < ar.size(); ++i) out[s[0] + static_cast<int>(i) + 1] += ar[i] * v;
    }
    return out;
}

} // namespace

TEST_SUITE("processes") {

TEST_CASE("geometric truncation hits the documented support") {
    const MACoefficients c =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), std::pow(2.0, -20));
    CHECK(c.support_size() == 21); // {0..20}
    CHECK(c.at(LatticePoint(20)) == doctest::Approx(std::pow(0.5, 20)));
    CHECK(c.at(LatticePoint(21)) == 0.0);
    CHECK(c.truncation_error() == doctest::Approx(std::pow(2.0, -20)));

    // tail honesty: the dropped mass really is below the certificate
    double dropped = 0.0;
    for (int s = 21; s <= 200; ++s) dropped += std::pow(0.5, s);
    CHECK(dropped <= c.truncation_error() * (1 + 1e-12));
}

TEST_CASE("explicit and degenerate families") {
    const MACoefficients iid = truncate_coefficients(
        CoefficientDescriptor::explicit_list(1, {{LatticePoint(0), 1.0}}), 1e-9);
    CHECK(iid.support_size() == 1);
    CHECK(iid.truncation_error() == 0.0);
    CHECK(iid.l1_norm() == 1.0);
    CHECK(iid.gamma(1) == 0.0); // support inside every ball

    CHECK_THROWS_AS(truncate_coefficients(
                        CoefficientDescriptor::explicit_list(1, {{LatticePoint(0), 0.0}}), 1e-9),
                    ArgumentError); // zeros dropped leaves empty support
}

TEST_CASE("polynomial truncation respects the integral bound") {
    const MACoefficients c = truncate_coefficients(CoefficientDescriptor::polynomial(4.0), 1e-3);
    // numeric tail oracle over a long extension
    const int radius = c.support_radius();
    double tail = 0.0;
    for (int s = radius + 1; s <= radius + 2000000; ++s) tail += 2.0 * std::pow(1.0 + s, -4.0);
    CHECK(tail <= 1e-3);
    CHECK(c.truncation_error() <= 1e-3);
    CHECK(tail <= c.truncation_error());
    CHECK_THROWS_AS(truncate_coefficients(CoefficientDescriptor::polynomial(1.5), 1e-3), ModelError);
}

TEST_CASE("two-sided geometric truncation certifies its tail in every dimension") {
    for (int dim : {1, 2}) {
        const MACoefficients c =
            truncate_coefficients(CoefficientDescriptor::geometric(0.4, true, dim), 1e-6);
        const int radius = c.support_radius();
        // numeric tail: sum over shells beyond the support
        double tail = 0.0;
        for (int r = radius + 1; r <= radius + 200; ++r) {
            const double shell = std::pow(2.0 * r + 1.0, dim) - std::pow(2.0 * r - 1.0, dim);
            tail += shell * std::pow(0.4, r);
        }
        CHECK(tail <= 1e-6);
        CHECK(c.truncation_error() <= 1e-6 * (1 + 1e-9));
    }
}

TEST_CASE("gamma uses the half-radius ball complement") {
    const MACoefficients c =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-12);
    for (int a = 1; a <= 10; ++a)
        CHECK(c.gamma(a) == doctest::Approx(std::pow(2.0, -(a / 2))).epsilon(1e-9));
    // nonincreasing and vanishing beyond the support
    double prev = c.gamma(0);
    for (int a = 1; a <= 100; ++a) {
        CHECK(c.gamma(a) <= prev + 1e-15);
        prev = c.gamma(a);
    }
    CHECK(c.gamma(2 * c.support_radius() + 2) == 0.0);
}

TEST_CASE("identity filter reproduces the innovations") {
    const MACoefficients iid = truncate_coefficients(
        CoefficientDescriptor::explicit_list(1, {{LatticePoint(0), 1.0}}), 1e-9);
    const Box box(1, 50, false);
    const InnovationField field(InnovationSpec::rademacher(), 99);
    const ProcessWindow w = simulate_ma_window(iid, InnovationSpec::rademacher(), box, 99);
    for (long long i = 0; i < box.size(); ++i)
        CHECK(w.values[static_cast<std::size_t>(i)] == field(box.point(i)));
}

TEST_CASE("telescoping filter annihilates an alternating test sequence") {
    const MACoefficients sum2 = truncate_coefficients(
        CoefficientDescriptor::explicit_list(1, {{LatticePoint(0), 1.0}, {LatticePoint(1), 1.0}}),
        1e-9);
    const Box box(1, 20, false);
    const ProcessWindow w = simulate_ma_window_with(
        sum2, box, [](const LatticePoint& p) { return p[0] % 2 == 0 ? 1.0 : -1.0; });
    for (double v : w.values) CHECK(v == 0.0);
}

TEST_CASE("sample variance matches the coefficient power sum") {
    const MACoefficients c =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-10);
    const Box box(1, 100000, false);
    const ProcessWindow w = simulate_ma_window(c, InnovationSpec::rademacher(), box, 2024);
    double mean = 0.0;
    for (double v : w.values) mean += v;
    mean /= static_cast<double>(w.values.size());
    double var = 0.0;
    for (double v : w.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w.values.size()) - 1.0;
    // target 4/3; dependent samples, so allow a generous banded check: the
    // standard error of the variance over 1e5 weakly dependent points is
    // below 0.02, three of those stay well inside 0.06.
    CHECK(var == doctest::Approx(4.0 / 3.0).epsilon(0.05));
}

TEST_CASE("windows are linear in the coefficients and bitwise deterministic") {
    const auto entries = std::vector<std::pair<LatticePoint, double>>{
        {LatticePoint(0), 0.8}, {LatticePoint(1), -0.3}, {LatticePoint(3), 0.1}};
    const MACoefficients c = truncate_coefficients(CoefficientDescriptor::explicit_list(1, entries), 1e-9);
    auto scaled_entries = entries;
    for (auto& [s, v] : scaled_entries) v *= -2.5;
    const MACoefficients c2 = truncate_coefficients(CoefficientDescriptor::explicit_list(1, scaled_entries), 1e-9);

    const Box box(1, 64, false);
    const InnovationSpec innov = InnovationSpec::gaussian();
    const ProcessWindow w1 = simulate_ma_window(c, innov, box, 7);
    const ProcessWindow w1_again = simulate_ma_window(c, innov, box, 7);
    const ProcessWindow w2 = simulate_ma_window(c2, innov, box, 7);
    CHECK(w1.values == w1_again.values);
    for (std::size_t i = 0; i < w1.values.size(); ++i)
        CHECK(w2.values[i] == doctest::Approx(-2.5 * w1.values[i]).epsilon(1e-12));
}

TEST_CASE("overlapping windows agree on shared points") {
    const MACoefficients c =
        truncate_coefficients(CoefficientDescriptor::geometric(0.5, false), 1e-10);
    const ProcessWindow small = simulate_ma_window(c, InnovationSpec::rademacher(), Box(1, 10, false), 42);
    const ProcessWindow large = simulate_ma_window(c, InnovationSpec::rademacher(), Box(1, 25, false), 42);
    for (std::size_t i = 0; i < small.values.size(); ++i)
        CHECK(small.values[i] == large.values[i]);
}

TEST_CASE("innovation laws are standardized, with exact closed-form moments") {
    const InnovationSpec specs[] = {InnovationSpec::rademacher(), InnovationSpec::gaussian(),
                                    InnovationSpec::centered_uniform(), InnovationSpec::two_point(0.2)};
    for (const InnovationSpec& spec : specs) {
        CHECK(spec.signed_moment(0) == 1.0);
        CHECK(spec.signed_moment(1) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(spec.signed_moment(2) == doctest::Approx(1.0));

        // 1e6 deterministic draws: mean within 4 se of 0, variance within 4 se of 1
        const int draws = 1'000'000;
        double sum = 0.0, sumsq = 0.0, sum4 = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double y = spec.sample(uniform_pair(philox_block(321, static_cast<std::uint64_t>(i))));
            sum += y;
            sumsq += y * y;
            sum4 += y * y * y * y;
        }
        const double mean = sum / draws;
        const double m2 = sumsq / draws;
        const double m4 = sum4 / draws;
        const double se_mean = std::sqrt(m2 / draws);
        const double se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / draws);
        CHECK(std::abs(mean) <= 4.0 * se_mean);
        CHECK(std::abs(m2 - 1.0) <= 4.0 * se_var);
    }
    CHECK(InnovationSpec::gaussian().signed_moment(4) == doctest::Approx(3.0));
    CHECK(InnovationSpec::gaussian().abs_moment(1) == doctest::Approx(std::sqrt(2.0 / M_PI)));
    CHECK(InnovationSpec::centered_uniform().signed_moment(4) == doctest::Approx(9.0 / 5.0));
    CHECK(InnovationSpec::rademacher().abs_moment(7) == 1.0);
    CHECK_THROWS_AS(InnovationSpec::two_point(0.0), ArgumentError);
}

TEST_CASE("arma reduction removes exactly the shared factors") {
    // (1 - 0.5 z)(1 - 0.3 z) = 1 - 0.8 z + 0.15 z^2 against (1 - 0.3 z)
    ArmaModel shared;
    shared.ar = {-0.8, 0.15};
    shared.ma = {-0.3};
    const ArmaModel reduced = arma_reduce(shared, 1e-8);
    REQUIRE(reduced.ar_reduced.size() == 2);
    CHECK(reduced.ar_reduced[0] == doctest::Approx(1.0));
    CHECK(reduced.ar_reduced[1] == doctest::Approx(-0.5).epsilon(1e-9));
    REQUIRE(reduced.ma_reduced.size() == 1);
    CHECK(reduced.ma_reduced[0] == doctest::Approx(1.0));

    // coprime polynomials stay untouched
    ArmaModel coprime;
    coprime.ar = {-0.5};
    coprime.ma = {0.7};
    const ArmaModel same = arma_reduce(coprime, 1e-8);
    CHECK(same.ar_reduced == std::vector<double>{1.0, -0.5});
    CHECK(same.ma_reduced == std::vector<double>{1.0, 0.7});

    // A = B degenerates to the i.i.d. recursion
    ArmaModel equal;
    equal.ar = {-0.6, 0.08};
    equal.ma = {-0.6, 0.08};
    const ArmaModel unit = arma_reduce(equal, 1e-8);
    CHECK(unit.ar_reduced == std::vector<double>{1.0});
    CHECK(unit.ma_reduced == std::vector<double>{1.0});
    const MACoefficients c = arma_to_ma(unit, 1e-12, 1e-8);
    REQUIRE(c.support_size() == 1);
    CHECK(c.at(LatticePoint(0)) == doctest::Approx(1.0));
}

TEST_CASE("ar(1) expansion matches power-series long division") {
    ArmaModel ar1;
    ar1.ar = {-0.5};
    const MACoefficients c = arma_to_ma(arma_reduce(ar1, 1e-8), 1e-12, 1e-8);
    const std::vector<double> oracle = oracles::causal_division(ar1.ar, ar1.ma, 31);
    for (int j = 0; j <= 30; ++j) {
        CHECK(c.at(LatticePoint(j)) == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-12));
        CHECK(oracle[static_cast<std::size_t>(j)] == doctest::Approx(std::pow(0.5, j)));
    }
    CHECK(c.at(LatticePoint(-1)) == 0.0); // causal
}

TEST_CASE("pure ma recursions are expanded exactly") {
    ArmaModel ma3;
    ma3.ma = {0.4, -0.2, 1.5};
    const MACoefficients c = arma_to_ma(arma_reduce(ma3, 1e-8), 1e-12, 1e-8);
    CHECK(c.truncation_error() == 0.0);
    CHECK(c.at(LatticePoint(0)) == 1.0);
    CHECK(c.at(LatticePoint(1)) == 0.4);
    CHECK(c.at(LatticePoint(2)) == -0.2);
    CHECK(c.at(LatticePoint(3)) == 1.5);
    CHECK(c.support_size() == 4);
}

TEST_CASE("unit-circle roots have no ma expansion") {
    ArmaModel unit_root;
    unit_root.ar = {-1.0}; // 1 - z
    CHECK_THROWS_AS(arma_to_ma(arma_reduce(unit_root, 1e-8), 1e-12, 1e-8), ExistenceError);

    ArmaModel not_reduced;
    not_reduced.ar = {-0.5};
    CHECK_THROWS_AS(arma_to_ma(not_reduced, 1e-12, 1e-8), ArgumentError);
}

TEST_CASE("the defining recursion holds after expansion, including two-sided cases") {
    struct Case {
        std::vector<double> ar, ma;
    };
    const Case cases[] = {
        {{-0.5}, {}},
        {{-0.8, 0.15}, {-0.3}},
        {{0.4, -0.1}, {0.25, 0.25}},
        {{-2.5, 1.0}, {}},          // roots 0.5 and 2: genuinely two-sided
        {{-1.7, 0.66}, {0.5}},      // mixed magnitudes
    };
    const double tol = 1e-12;
    for (const Case& cs : cases) {
        ArmaModel model;
        model.ar = cs.ar;
        model.ma = cs.ma;
        const MACoefficients c = arma_to_ma(arma_reduce(model, 1e-8), tol, 1e-8);
        std::map<int, double> rhs{{0, 1.0}};
        for (std::size_t j = 0; j < cs.ma.size(); ++j) rhs[static_cast<int>(j) + 1] = cs.ma[j];
        CHECK(conv_distance(convolve_with_ar(cs.ar, c), rhs) <= 10 * tol);
    }
    // the two-sided case transfers the correct total mass: C(1) = B(1)/A(1)
    ArmaModel two_sided;
    two_sided.ar = {-2.5, 1.0};
    const MACoefficients c = arma_to_ma(arma_reduce(two_sided, 1e-8), tol, 1e-8);
    CHECK(c.coefficient_sum() == doctest::Approx(1.0 / (1.0 - 2.5 + 1.0)).epsilon(1e-9));
    bool has_negative_lag = false;
    for (const auto& [s, v] : c.entries()) has_negative_lag = has_negative_lag || s[0] < 0;
    CHECK(has_negative_lag);
}

TEST_CASE("markov chains validate and expose exact joint laws") {
    CHECK_THROWS_AS(MarkovChain({{0.5, 0.6}, {0.5, 0.5}}), ModelError);
    CHECK_THROWS_AS(MarkovChain({{0.5, 0.5}, {0.5, -0.5}}), ModelError); // negative entry

    const MarkovChain coin({{0.5, 0.5}, {0.5, 0.5}});
    CHECK(coin.stationary()[0] == doctest::Approx(0.5));
    const JointTable t = coin.joint_law(std::vector<long long>{0, 3, 5});
    for (double p : t.probs) CHECK(p == doctest::Approx(0.125));

    const MarkovChain chain({{0.7, 0.3}, {0.4, 0.6}});
    CHECK(chain.stationary()[0] == doctest::Approx(4.0 / 7.0));
    const JointTable joint = chain.joint_law(std::vector<long long>{0, 2});
    // manual two-step transition
    const double p2_00 = 0.7 * 0.7 + 0.3 * 0.4;
    CHECK(joint.probs[0] == doctest::Approx((4.0 / 7.0) * p2_00));
    double total = 0.0;
    for (double p : joint.probs) total += p;
    CHECK(total == doctest::Approx(1.0));

    // frozen chain: minimum-norm stationary pick is uniform
    const MarkovChain frozen({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(frozen.stationary()[0] == doctest::Approx(0.5));
}

TEST_CASE("chain paths are deterministic and respect the transition structure") {
    const MarkovChain chain({{0.9, 0.1}, {0.2, 0.8}}, std::nullopt,
                            std::vector<double>{-1.0, 1.0});
    const auto path1 = chain.simulate_values(500, 11);
    const auto path2 = chain.simulate_values(500, 11);
    CHECK(path1 == path2);
    for (double v : path1) CHECK((v == -1.0 || v == 1.0));

    // long-run variance exists and exceeds the i.i.d. variance for a sticky chain
    const double lrv = chain.long_run_variance();
    CHECK(lrv > 1.0);
    CHECK_THROWS_AS(MarkovChain({{1.0, 0.0}, {0.0, 1.0}}).long_run_variance(), ModelError);
}

TEST_CASE("digit stream values live in [0, 10) and expose their digits") {
    const DigitProcess digits(77);
    for (long long n = 0; n < 2000; ++n) {
        const double x = digits.value_at(n);
        CHECK(x >= 0.0);
        CHECK(x < 10.0);
        CHECK(static_cast<int>(x) == digits.digit_at(n));
        // first decimal place of X_n is the next digit
        const int first_decimal = static_cast<int>(std::floor((x - std::floor(x)) * 10.0));
        CHECK(first_decimal == digits.digit_at(n + 1));
    }
    const auto w = digits.window(5, 10);
    CHECK(w.size() == 6);
    CHECK(w[0] == digits.value_at(5));
}

TEST_CASE("dependence witness is exactly 9/100 and variants behave") {
    CHECK(nonmixing_witness() == Rational(9, 100));
    CHECK(shared_digit_gap(2) == Rational(1, 4)); // fair bits: 1/2 - 1/4
    CHECK(disjoint_digit_gap(10) == Rational(0));
    CHECK(boost::rational_cast<double>(nonmixing_witness()) == doctest::Approx(0.09));
}

} // TEST_SUITE
