#include "cltlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cltlab/arma.hpp"
#include "cltlab/digit_process.hpp"
#include "cltlab/simulate.hpp"

namespace cltlab {

namespace {

LatticePoint point_from_json(const Json& arr, int dim, const std::string& key) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
        throw ConfigError("config key '" + key + "': expected a length-" + std::to_string(dim) +
                          " coordinate list");
    LatticePoint p;
    for (int i = 0; i < dim; ++i) p[i] = arr[static_cast<std::size_t>(i)].get<int>();
    return p;
}

std::vector<std::pair<LatticePoint, double>> entries_from_csv(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("coefficient csv '" + path + "': cannot open");
    std::vector<std::pair<LatticePoint, double>> entries;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (first) {
            first = false;
            // optional header line: s_1..s_d,c
            if (!cells.empty() && cells.front().find_first_not_of(" \t-+.0123456789eE") != std::string::npos)
                continue;
        }
        if (static_cast<int>(cells.size()) != dim + 1)
            throw ConfigError("coefficient csv '" + path + "': expected " + std::to_string(dim + 1) +
                              " columns (s_1..s_" + std::to_string(dim) + ", c)");
        LatticePoint p;
        for (int i = 0; i < dim; ++i) p[i] = std::stoi(cells[static_cast<std::size_t>(i)]);
        entries.emplace_back(p, std::stod(cells[static_cast<std::size_t>(dim)]));
    }
    return entries;
}

} // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> registry = {
        {"clt", "Monte Carlo moments and KS distance of normalized window sums",
         {"seed", "process", "space", "clt.n_grid", "clt.replications"}},
        {"moments", "exact mixed moments for configured tuples", {"seed", "process", "moments.tuples"}},
        {"verify-m4", "moment separation certificates over a window sweep",
         {"seed", "process", "verify_m4.window", "verify_m4.k_max", "verify_m4.a_list"}},
        {"sigma2", "long-run variance partials, closed form and extrapolation",
         {"seed", "process", "space", "sigma2.n_grid"}},
        {"arma-expand", "reduction and MA expansion of an ARMA recursion", {"seed", "process"}},
        {"mixing", "exact alpha computations: witness, profile, or product bound",
         {"seed", "mixing.variant"}},
        {"diagnostics", "finite-grid trend checks for the growth and moment conditions",
         {"seed", "process", "space", "diagnostics.n_grid"}},
        {"counting-lemma", "exhaustive tuple-class counts against both bounds",
         {"seed", "counting_lemma.sides", "counting_lemma.k_list", "counting_lemma.a_list"}},
    };
    return registry;
}

InnovationSpec innovation_from_config(const Config& config) {
    const std::string kind = config.get_or<std::string>("process.innovation.kind", "rademacher");
    if (kind == "rademacher") return InnovationSpec::rademacher();
    if (kind == "gaussian") return InnovationSpec::gaussian();
    if (kind == "centered_uniform") return InnovationSpec::centered_uniform();
    if (kind == "two_point") return InnovationSpec::two_point(config.require<double>("process.innovation.p"));
    throw ConfigError("config key 'process.innovation.kind': unknown innovation '" + kind +
                      "' (heavy-tailed families are rejected: every moment must be finite)");
}

MACoefficients coefficients_from_config(const Config& config) {
    const std::string kind = config.require<std::string>("process.kind");
    if (kind == "arma") {
        ArmaModel model;
        model.ar = config.get_or<std::vector<double>>("process.ar", {});
        model.ma = config.get_or<std::vector<double>>("process.ma", {});
        const double root_tol = config.get_or<double>("process.root_tol", 1e-8);
        const double unit_tol = config.get_or<double>("process.unit_circle_tol", 1e-8);
        const double tol = config.get_or<double>("process.tol", 1e-12);
        try {
            return arma_to_ma(arma_reduce(std::move(model), root_tol), tol, unit_tol);
        } catch (const ExistenceError& e) {
            throw ExistenceError(std::string(e.what()) + " (config key 'process.ar')");
        }
    }
    if (kind != "ma") throw ConfigError("config key 'process.kind': expected 'ma' or 'arma', got '" + kind + "'");

    const std::string family = config.require<std::string>("process.coefficients.family");
    const double tol = config.get_or<double>("process.truncation_tol", 1e-12);
    if (family == "geometric") {
        const double rho = config.require<double>("process.coefficients.rho");
        const bool two_sided = config.get_or<bool>("process.coefficients.two_sided", false);
        const int dim = config.get_or<int>("process.coefficients.dim", 1);
        return truncate_coefficients(CoefficientDescriptor::geometric(rho, two_sided, dim), tol);
    }
    if (family == "polynomial") {
        const double beta = config.require<double>("process.coefficients.beta");
        return truncate_coefficients(CoefficientDescriptor::polynomial(beta), tol);
    }
    if (family == "explicit") {
        const int dim = config.get_or<int>("process.coefficients.dim", 1);
        const Json* list = config.find("process.coefficients.entries");
        if (!list || !list->is_array() || list->empty())
            throw ConfigError("config key 'process.coefficients.entries': expected a nonempty list");
        std::vector<std::pair<LatticePoint, double>> entries;
        for (const Json& e : *list)
            entries.emplace_back(point_from_json(e.at("s"), dim, "process.coefficients.entries[].s"),
                                 e.at("c").get<double>());
        return truncate_coefficients(CoefficientDescriptor::explicit_list(dim, std::move(entries)), tol);
    }
    if (family == "csv") {
        const int dim = config.get_or<int>("process.coefficients.dim", 1);
        const std::string path = config.require<std::string>("process.coefficients.path");
        return truncate_coefficients(
            CoefficientDescriptor::explicit_list(dim, entries_from_csv(path, dim)), tol);
    }
    throw ConfigError("config key 'process.coefficients.family': unknown family '" + family + "'");
}

BoxFamily family_from_config(const Config& config) {
    const std::string kind = config.get_or<std::string>("space.kind", "box");
    if (kind != "box")
        throw ConfigError("config key 'space.kind': family experiments need 'box', got '" + kind + "'");
    const int dim = config.get_or<int>("space.dim", 1);
    const bool centered = config.get_or<bool>("space.centered", false);
    if (dim < 1 || dim > kMaxDim)
        throw ConfigError("config key 'space.dim': outside 1.." + std::to_string(kMaxDim));
    return BoxFamily(dim, centered);
}

MarkovChain chain_from_config(const Config& config) {
    const auto transition = config.require<std::vector<std::vector<double>>>("process.transition");
    std::optional<std::vector<double>> init;
    if (config.has("process.init")) {
        const Json* node = config.find("process.init");
        if (!node->is_string()) init = config.require<std::vector<double>>("process.init");
        // the string "stationary" (the default) keeps init unset
    }
    std::optional<std::vector<double>> values;
    if (config.has("process.values")) values = config.require<std::vector<double>>("process.values");
    try {
        return MarkovChain(transition, std::move(init), std::move(values));
    } catch (const ModelError& e) {
        throw ModelError(std::string(e.what()) + " (config key 'process.transition')");
    }
}

namespace {

std::uint64_t seed_from_config(const Config& config) {
    if (!config.has("seed"))
        throw ConfigError("config key 'seed': missing (runs must be reproducible; "
                          "there is no wall-clock default)");
    return config.require<std::uint64_t>("seed");
}

int schema_version(const Config& config) {
    const int v = config.get_or<int>("schema_version", -1);
    if (v != 1) throw ConfigError("config key 'schema_version': expected 1");
    return v;
}

// ---------------------------------------------------------------- clt ----

ExperimentOutcome run_clt(const Config& config, const RunOverrides& overrides) {
    const std::uint64_t seed = seed_from_config(config);
    const BoxFamily family = family_from_config(config);
    const std::string kind = config.require<std::string>("process.kind");

    CltOptions opt;
    opt.n_grid = config.require<std::vector<int>>("clt.n_grid");
    opt.replications = config.require<int>("clt.replications");
    opt.k_max = config.get_or<int>("clt.k_max", 6);
    opt.k_assert_max = std::min(config.get_or<int>("clt.k_assert_max", 6), 6);
    opt.seed = seed;
    opt.workers = overrides.workers.value_or(config.get_or<int>("clt.workers", 1));
    opt.max_attempts = config.get_or<int>("clt.max_attempts", 2);
    opt.ks_alpha = config.get_or<double>("clt.ks_alpha", 0.01);
    opt.se_multiplier = config.get_or<double>("clt.se_multiplier", 4.0);
    opt.even_moment_rel_slack = config.get_or<double>("clt.even_moment_rel_slack", 0.15);

    WindowSampler sampler;
    double sigma2_value = 0.0;
    if (kind == "ma" || kind == "arma") {
        const MACoefficients coeffs = coefficients_from_config(config);
        const InnovationSpec innov = innovation_from_config(config);
        if (coeffs.dim() != family.dim())
            throw ConfigError("config key 'space.dim': does not match the coefficient dimension");
        const double s = coeffs.coefficient_sum();
        sigma2_value = s * s;
        opt.exact_second_moment = [coeffs, family](int n) {
            return finite_window_second_moment(coeffs, family.box(n));
        };
        sampler = [coeffs, innov](const Box& box, std::uint64_t rep_seed) {
            return simulate_ma_window(coeffs, innov, box, rep_seed).values;
        };
    } else if (kind == "chain") {
        const MarkovChain chain = chain_from_config(config);
        if (family.dim() != 1 || family.centered())
            throw ConfigError("config key 'space': chain processes run on one-sided 1-d boxes");
        if (std::abs(chain.stationary_mean()) > 1e-9)
            throw ConfigError("config key 'process.values': state values must be centered under "
                              "the stationary law for the clt experiment");
        sigma2_value = chain.long_run_variance();
        sampler = [chain](const Box& box, std::uint64_t rep_seed) {
            const std::vector<double> path = chain.simulate_values(box.hi(), rep_seed);
            return std::vector<double>(path.begin() + box.lo(), path.end());
        };
    } else if (kind == "digit") {
        throw ConfigError("config key 'process.kind': the digit stream is not centered; "
                          "it supports the mixing experiment, not clt");
    } else {
        throw ConfigError("config key 'process.kind': unknown kind '" + kind + "'");
    }

    const CltReport report = run_clt_experiment(family, sampler, sigma2_value, opt);

    std::vector<std::string> columns{"n", "points", "replications", "attempt"};
    for (int k = 1; k <= opt.k_max; ++k) columns.push_back("m" + std::to_string(k));
    for (int k = 1; k <= opt.k_max; ++k) columns.push_back("target" + std::to_string(k));
    for (int k = 1; k <= opt.k_max; ++k) columns.push_back("se" + std::to_string(k));
    columns.insert(columns.end(), {"ks", "ks_critical", "max_abs_sum", "sigma2", "pass"});
    CsvWriter csv(columns);
    for (const CltRow& row : report.rows) {
        std::vector<std::string> cells{std::to_string(row.n), std::to_string(row.points),
                                       std::to_string(row.replications), std::to_string(row.attempt)};
        for (const auto& m : row.moments) cells.push_back(fmt_double(m.value));
        for (const auto& m : row.moments) cells.push_back(fmt_double(m.target));
        for (const auto& m : row.moments) cells.push_back(fmt_double(m.std_err));
        cells.push_back(fmt_double(row.ks));
        cells.push_back(fmt_double(row.ks_critical));
        cells.push_back(fmt_double(row.max_abs_sum));
        cells.push_back(fmt_double(report.sigma2_value));
        cells.push_back(row.pass ? "true" : "false");
        csv.row(cells);
    }

    std::ostringstream summary;
    summary << "clt: sigma2 = " << fmt_double(report.sigma2_value) << "\n";
    for (const CltRow& row : report.rows) {
        summary << "  n=" << row.n << " attempt=" << row.attempt << " ks=" << fmt_double(row.ks)
                << " (crit " << fmt_double(row.ks_critical) << ")";
        for (const auto& m : row.moments)
            if (m.k <= 4) summary << " m" << m.k << "=" << fmt_double(m.value);
        summary << (row.pass ? " [pass]" : " [fail]") << "\n";
    }

    ExperimentOutcome outcome;
    outcome.assertions_ok = report.all_pass;
    outcome.summary = summary.str();
    outcome.report = to_json(report);
    outcome.csv = csv.str();
    return outcome;
}

// ------------------------------------------------------------- moments ----

ExperimentOutcome run_moments(const Config& config) {
    seed_from_config(config);
    const MACoefficients coeffs = coefficients_from_config(config);
    const InnovationSpec innov = innovation_from_config(config);
    const std::int64_t cap = config.get_or<std::int64_t>("moments.assignment_cap", 10'000'000);

    const Json* tuples = config.find("moments.tuples");
    if (!tuples || !tuples->is_array() || tuples->empty())
        throw ConfigError("config key 'moments.tuples': expected a nonempty list of tuples");

    Json rows = Json::array();
    CsvWriter csv({"k", "tuple", "value", "assignments"});
    std::ostringstream summary;
    summary << "moments:\n";
    for (const Json& tj : *tuples) {
        std::vector<LatticePoint> tuple;
        for (const Json& pj : tj)
            tuple.push_back(point_from_json(pj, coeffs.dim(), "moments.tuples[][]"));
        const MomentReport r = exact_mixed_moment(coeffs, innov, tuple, cap);
        rows.push_back(to_json(r, coeffs.dim()));
        std::string tuple_text;
        for (const auto& p : tuple) tuple_text += to_string(p, coeffs.dim());
        csv.row({std::to_string(tuple.size()), tuple_text, fmt_double(r.value),
                 std::to_string(r.assignments)});
        summary << "  E X_" << tuple_text << " = " << fmt_double(r.value) << "\n";
    }

    ExperimentOutcome outcome;
    outcome.summary = summary.str();
    outcome.report = Json{{"rows", rows}};
    outcome.csv = csv.str();
    return outcome;
}

// ------------------------------------------------------------ verify-m4 ----

ExperimentOutcome run_verify_m4(const Config& config) {
    seed_from_config(config);
    const MACoefficients coeffs = coefficients_from_config(config);
    const InnovationSpec innov = innovation_from_config(config);
    const int window = config.require<int>("verify_m4.window");
    const int k_max = config.require<int>("verify_m4.k_max");
    const std::vector<int> a_list = config.require<std::vector<int>>("verify_m4.a_list");
    const long long subsample = config.get_or<long long>("verify_m4.subsample", 10'000);
    const std::int64_t cap = config.get_or<std::int64_t>("verify_m4.assignment_cap", 10'000'000);

    if (coeffs.dim() != 1) throw ConfigError("config key 'process': the m4 sweep runs on 1-d windows");
    if (window < 1 || window > 64) throw ConfigError("config key 'verify_m4.window': outside 1..64");
    if (k_max < 1 || k_max > 6) throw ConfigError("config key 'verify_m4.k_max': outside 1..6");
    if (a_list.empty()) throw ConfigError("config key 'verify_m4.a_list': empty");
    if (subsample < 1) throw ConfigError("config key 'verify_m4.subsample': must be positive");

    const Box box(1, window, false);

    // Tuple universe: all k-tuples over the window for k = 1..k_max,
    // concatenated; deterministic strided subsample down to the budget.
    std::vector<long long> k_offset(static_cast<std::size_t>(k_max) + 1, 0);
    long long total = 0;
    for (int k = 1; k <= k_max; ++k) {
        long long count = 1;
        for (int i = 0; i < k; ++i) count *= window;
        k_offset[static_cast<std::size_t>(k)] = total;
        total += count;
    }
    const long long picks = std::min<long long>(subsample, total);

    std::vector<SeparationConstants> constants;
    constants.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) constants.push_back(separation_constants(coeffs, innov, k));

    CsvWriter csv({"k", "tuple", "a", "partition_blocks", "lhs", "c_k", "gamma_a", "rhs", "holds"});
    long long checked = 0, failed = 0;
    double worst_margin = -1.0; // max lhs - rhs
    Json failures = Json::array();

    std::vector<LatticePoint> tuple;
    for (long long pick = 0; pick < picks; ++pick) {
        const long long global = pick * (total / picks) + std::min(pick, total % picks);
        int k = k_max;
        while (k > 1 && global < k_offset[static_cast<std::size_t>(k)]) --k;
        long long rem = global - k_offset[static_cast<std::size_t>(k)];
        tuple.clear();
        for (int i = 0; i < k; ++i) {
            tuple.push_back(LatticePoint(1 + static_cast<int>(rem % window)));
            rem /= window;
        }

        // Cache sub-tuple moments across the radii; the partition changes
        // with a but its blocks repeat.
        std::unordered_map<unsigned, double> moment_of_mask;
        auto masked_moment = [&](unsigned mask) {
            const auto it = moment_of_mask.find(mask);
            if (it != moment_of_mask.end()) return it->second;
            std::vector<LatticePoint> sub;
            for (int i = 0; i < k; ++i)
                if (mask >> i & 1u) sub.push_back(tuple[static_cast<std::size_t>(i)]);
            const double value = exact_mixed_moment(coeffs, innov, sub, cap).value;
            moment_of_mask.emplace(mask, value);
            return value;
        };
        const double full = masked_moment((1u << k) - 1u);

        for (int a : a_list) {
            const Partition pi = lattice_decomposition(tuple, a);
            double product = 1.0;
            for (const auto& block : pi.blocks()) {
                unsigned mask = 0;
                for (int e : block) mask |= 1u << (e - 1);
                product *= masked_moment(mask);
            }
            const double lhs = std::abs(full - product);
            const auto& cst = constants[static_cast<std::size_t>(k - 1)];
            const double gamma_a = cst.gamma(a);
            const double rhs = cst.c_k * gamma_a;
            const bool holds = lhs <= rhs + 1e-12;
            ++checked;
            worst_margin = std::max(worst_margin, lhs - rhs);
            std::string tuple_text;
            for (const auto& p : tuple) tuple_text += to_string(p, 1);
            csv.row({std::to_string(k), tuple_text, std::to_string(a),
                     std::to_string(pi.block_count()), fmt_double(lhs), fmt_double(cst.c_k),
                     fmt_double(gamma_a), fmt_double(rhs), holds ? "true" : "false"});
            if (!holds) {
                ++failed;
                if (failures.size() < 32)
                    failures.push_back({{"tuple", tuple_text}, {"a", a}, {"lhs", lhs}, {"rhs", rhs}});
            }
        }
    }

    std::ostringstream summary;
    summary << "verify-m4: " << checked << " certificates, " << failed << " violated, "
            << "worst lhs-rhs margin " << fmt_double(worst_margin) << "\n";

    ExperimentOutcome outcome;
    outcome.assertions_ok = failed == 0;
    outcome.summary = summary.str();
    outcome.report = Json{{"window", window},     {"k_max", k_max},   {"a_list", a_list},
                          {"checked", checked},   {"failed", failed}, {"worst_margin", worst_margin},
                          {"failures", failures}};
    outcome.csv = csv.str();
    return outcome;
}

// --------------------------------------------------------------- sigma2 ----

ExperimentOutcome run_sigma2(const Config& config) {
    seed_from_config(config);
    const MACoefficients coeffs = coefficients_from_config(config);
    const BoxFamily family = family_from_config(config);
    const std::vector<int> n_grid = config.require<std::vector<int>>("sigma2.n_grid");
    const LongRunVariance v = sigma2(coeffs, family, n_grid);

    CsvWriter csv({"n", "partial"});
    for (const auto& [n, value] : v.partials) csv.row({std::to_string(n), fmt_double(value)});

    std::ostringstream summary;
    summary << "sigma2: value = " << fmt_double(v.value());
    if (v.closed_form) summary << " (closed form " << fmt_double(*v.closed_form) << ")";
    if (v.extrapolated) summary << ", extrapolated " << fmt_double(*v.extrapolated);
    summary << "\n";

    ExperimentOutcome outcome;
    outcome.summary = summary.str();
    outcome.report = to_json(v);
    outcome.csv = csv.str();
    return outcome;
}

// ---------------------------------------------------------- arma-expand ----

ExperimentOutcome run_arma_expand(const Config& config) {
    seed_from_config(config);
    if (config.require<std::string>("process.kind") != "arma")
        throw ConfigError("config key 'process.kind': arma-expand needs an arma process");

    ArmaModel model;
    model.ar = config.get_or<std::vector<double>>("process.ar", {});
    model.ma = config.get_or<std::vector<double>>("process.ma", {});
    const double root_tol = config.get_or<double>("process.root_tol", 1e-8);
    const double unit_tol = config.get_or<double>("process.unit_circle_tol", 1e-8);
    const double tol = config.get_or<double>("process.tol", 1e-12);

    const ArmaModel reduced = arma_reduce(std::move(model), root_tol);
    MACoefficients coeffs = [&] {
        try {
            return arma_to_ma(reduced, tol, unit_tol);
        } catch (const ExistenceError& e) {
            throw ExistenceError(std::string(e.what()) + " (config key 'process.ar')");
        }
    }();

    Json roots = Json::array();
    for (const auto& z : reduced.ar_roots)
        roots.push_back({{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}});
    Json coeff_rows = Json::array();
    CsvWriter csv({"lag", "c"});
    for (const auto& [s, c] : coeffs.entries()) {
        coeff_rows.push_back({{"lag", s[0]}, {"c", c}});
        csv.row({std::to_string(s[0]), fmt_double(c)});
    }

    std::ostringstream summary;
    summary << "arma-expand: reduced degree " << reduced.ar_reduced.size() - 1 << ", "
            << coeffs.support_size() << " MA coefficients, |c|_1 = " << fmt_double(coeffs.l1_norm())
            << "\n  c_0.. = ";
    int shown = 0;
    for (const auto& [s, c] : coeffs.entries()) {
        if (s[0] < 0) continue;
        if (shown++ == 6) break;
        summary << fmt_double(c) << " ";
    }
    summary << "\n";

    ExperimentOutcome outcome;
    outcome.summary = summary.str();
    outcome.report = Json{{"ar", reduced.ar},
                          {"ma", reduced.ma},
                          {"ar_reduced", reduced.ar_reduced},
                          {"ma_reduced", reduced.ma_reduced},
                          {"roots", roots},
                          {"coefficients", coeff_rows},
                          {"l1_norm", coeffs.l1_norm()},
                          {"truncation_error", coeffs.truncation_error()}};
    outcome.csv = csv.str();
    return outcome;
}

// --------------------------------------------------------------- mixing ----

ExperimentOutcome run_mixing(const Config& config) {
    seed_from_config(config);
    const std::string variant = config.require<std::string>("mixing.variant");
    ExperimentOutcome outcome;

    if (variant == "nonmixing-witness") {
        const Rational witness = nonmixing_witness();
        const double value = boost::rational_cast<double>(witness);
        CsvWriter csv({"quantity", "numerator", "denominator", "value"});
        csv.row({"nonmixing_witness", std::to_string(witness.numerator()),
                 std::to_string(witness.denominator()), fmt_double(value)});
        outcome.summary = "mixing witness: " + fmt_double(value) + " = " +
                          std::to_string(witness.numerator()) + "/" +
                          std::to_string(witness.denominator()) +
                          " (same event pair exists past every gap)\n";
        outcome.report = Json{{"numerator", witness.numerator()},
                              {"denominator", witness.denominator()},
                              {"value", value}};
        outcome.csv = csv.str();
        return outcome;
    }

    if (variant == "alpha-profile") {
        const MarkovChain chain = chain_from_config(config);
        const auto base = config.require<std::vector<long long>>("mixing.base_window");
        const auto probe = config.get_or<std::vector<long long>>("mixing.probe_shape", {0});
        const auto d_list = config.require<std::vector<int>>("mixing.d_list");
        const MixingProfile profile = alpha_profile(chain, base, probe, d_list);
        CsvWriter csv({"d", "alpha"});
        std::ostringstream summary;
        summary << "alpha profile (window-restricted lower bounds):\n";
        for (const auto& row : profile.rows) {
            csv.row({std::to_string(row.d), fmt_double(row.alpha)});
            summary << "  d=" << row.d << " alpha=" << fmt_double(row.alpha) << "\n";
        }
        outcome.summary = summary.str();
        outcome.report = to_json(profile);
        outcome.csv = csv.str();
        return outcome;
    }

    if (variant == "lemma") {
        const MarkovChain chain = chain_from_config(config);
        const Json* wnode = config.find("mixing.windows");
        if (!wnode || !wnode->is_array() || wnode->size() < 2)
            throw ConfigError("config key 'mixing.windows': expected at least two windows");
        std::vector<std::vector<long long>> windows;
        for (const Json& w : *wnode) windows.push_back(w.get<std::vector<long long>>());
        const MixingLemmaReport report = verify_mixing_lemma(chain, windows);
        CsvWriter csv({"lhs", "rhs", "moment_cap", "holds"});
        csv.row({fmt_double(report.lhs), fmt_double(report.rhs), fmt_double(report.moment_cap),
                 report.holds ? "true" : "false"});
        outcome.assertions_ok = report.holds;
        outcome.summary = "mixing product bound: lhs=" + fmt_double(report.lhs) +
                          " rhs=" + fmt_double(report.rhs) + (report.holds ? " [holds]\n" : " [VIOLATED]\n");
        outcome.report = to_json(report);
        outcome.csv = csv.str();
        return outcome;
    }

    throw ConfigError("config key 'mixing.variant': unknown variant '" + variant + "'");
}

// ---------------------------------------------------------- diagnostics ----

ExperimentOutcome run_diagnostics(const Config& config) {
    seed_from_config(config);
    const MACoefficients coeffs = coefficients_from_config(config);
    const InnovationSpec innov = innovation_from_config(config);
    const BoxFamily family = family_from_config(config);
    const std::vector<int> n_grid = config.require<std::vector<int>>("diagnostics.n_grid");
    const std::vector<int> k_list = config.get_or<std::vector<int>>("diagnostics.k_list", {1, 2, 3});
    const std::vector<int> ell_list = config.get_or<std::vector<int>>("diagnostics.ell_list", {1, 2, 3});

    ConditionDiagnostics all = space_condition_diagnostics(
        family, [&](int a) { return coeffs.tail_bound(a); }, k_list, ell_list, n_grid);
    const ConditionDiagnostics moment = moment_condition_diagnostics(coeffs, innov, k_list, n_grid);
    all.rows.insert(all.rows.end(), moment.rows.begin(), moment.rows.end());
    all.any_fail = all.any_fail || moment.any_fail;

    CsvWriter csv({"condition", "params", "verdict", "note"});
    std::ostringstream summary;
    summary << "diagnostics (finite-grid trends, not proofs):\n";
    for (const auto& row : all.rows) {
        csv.row({row.condition, row.params, row.verdict, row.note});
        summary << "  " << row.condition << " " << row.params << ": " << row.verdict << "\n";
    }

    ExperimentOutcome outcome;
    outcome.assertions_ok = !all.any_fail;
    outcome.summary = summary.str();
    outcome.report = to_json(all);
    outcome.csv = csv.str();
    return outcome;
}

// ------------------------------------------------------- counting-lemma ----

ExperimentOutcome run_counting_lemma(const Config& config) {
    seed_from_config(config);
    const std::vector<int> sides = config.require<std::vector<int>>("counting_lemma.sides");
    const std::vector<int> k_list = config.require<std::vector<int>>("counting_lemma.k_list");
    const std::vector<int> a_list = config.require<std::vector<int>>("counting_lemma.a_list");
    const int dim = config.get_or<int>("space.dim", 1);
    const bool centered = config.get_or<bool>("space.centered", false);

    CsvWriter csv({"side", "k", "a", "partition", "count", "bound_blocks", "bound_coarse", "holds"});
    Json reports = Json::array();
    bool all_hold = true;
    long long rows = 0;
    for (int side : sides)
        for (int k : k_list)
            for (int a : a_list) {
                const CountingLemmaReport report =
                    verify_counting_lemma(make_box(dim, side, centered), k, a);
                all_hold = all_hold && report.all_hold;
                reports.push_back(to_json(report));
                for (const auto& row : report.rows) {
                    ++rows;
                    csv.row({std::to_string(side), std::to_string(k), std::to_string(a),
                             to_json(row.partition).dump(), std::to_string(row.count),
                             fmt_double(row.bound_blocks), fmt_double(row.bound_coarse),
                             row.holds ? "true" : "false"});
                }
            }

    ExperimentOutcome outcome;
    outcome.assertions_ok = all_hold;
    outcome.summary = "counting-lemma: " + std::to_string(rows) + " partition rows checked, " +
                      (all_hold ? "all within both bounds\n" : "VIOLATIONS found\n");
    outcome.report = Json{{"reports", reports}, {"all_hold", all_hold}};
    outcome.csv = csv.str();
    return outcome;
}

} // namespace

std::vector<std::string> validate_config(const Config& config) {
    std::vector<std::string> problems;
    auto guard = [&](const std::function<void()>& step) {
        try {
            step();
        } catch (const Error& e) {
            problems.emplace_back(e.what());
        }
    };
    guard([&] { schema_version(config); });
    guard([&] { seed_from_config(config); });

    std::string kind;
    guard([&] {
        kind = config.require<std::string>("experiment");
        const auto& registry = experiment_registry();
        const bool known = std::any_of(registry.begin(), registry.end(),
                                       [&](const ExperimentInfo& e) { return e.name == kind; });
        if (!known) throw ConfigError("config key 'experiment': unknown kind '" + kind + "'");
        for (const ExperimentInfo& e : registry)
            if (e.name == kind)
                for (const std::string& key : e.required_keys)
                    if (!config.has(key)) throw ConfigError("config key '" + key + "': missing");
    });
    if (!problems.empty()) return problems;

    // Build everything the experiment needs without running it.
    if (kind == "clt" || kind == "moments" || kind == "verify-m4" || kind == "sigma2" ||
        kind == "diagnostics") {
        guard([&] {
            const std::string process = config.require<std::string>("process.kind");
            if (process == "chain") {
                chain_from_config(config);
            } else if (process == "digit") {
                throw ConfigError("config key 'process.kind': the digit stream only supports the "
                                  "mixing experiment (it is not centered)");
            } else {
                coefficients_from_config(config);
                innovation_from_config(config);
            }
        });
    }
    if (kind == "clt" || kind == "sigma2" || kind == "diagnostics")
        guard([&] { family_from_config(config); });
    if (kind == "arma-expand")
        guard([&] {
            if (config.require<std::string>("process.kind") != "arma")
                throw ConfigError("config key 'process.kind': arma-expand needs an arma process");
        });
    if (kind == "mixing")
        guard([&] {
            const std::string variant = config.require<std::string>("mixing.variant");
            if (variant != "nonmixing-witness" && variant != "alpha-profile" && variant != "lemma")
                throw ConfigError("config key 'mixing.variant': unknown variant '" + variant + "'");
            if (variant != "nonmixing-witness") chain_from_config(config);
        });
    return problems;
}

ExperimentOutcome run_config(const Config& config, const RunOverrides& overrides) {
    schema_version(config);
    const std::string kind = config.require<std::string>("experiment");
    if (kind == "clt") return run_clt(config, overrides);
    if (kind == "moments") return run_moments(config);
    if (kind == "verify-m4") return run_verify_m4(config);
    if (kind == "sigma2") return run_sigma2(config);
    if (kind == "arma-expand") return run_arma_expand(config);
    if (kind == "mixing") return run_mixing(config);
    if (kind == "diagnostics") return run_diagnostics(config);
    if (kind == "counting-lemma") return run_counting_lemma(config);
    throw ConfigError("config key 'experiment': unknown kind '" + kind + "'");
}

} // namespace cltlab
