#include "cltlab/serialize.hpp"

#include <cstdio>

#include "cltlab/errors.hpp"

namespace cltlab {

std::string fmt_double(double v) {
    // Try increasing precision until the decimal round-trips exactly.
    char buffer[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, v);
        if (std::stod(buffer) == v) break;
    }
    return buffer;
}

std::string csv_cell(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : width_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ += ',';
        out_ += csv_cell(columns[i]);
    }
    out_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw ArgumentError("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += csv_cell(cells[i]);
    }
    out_ += '\n';
}

Json to_json(const Partition& p) {
    Json blocks = Json::array();
    for (const auto& b : p.blocks()) blocks.push_back(b);
    return blocks;
}

Json to_json(const LatticePoint& p, int dim) {
    Json coords = Json::array();
    for (int i = 0; i < dim; ++i) coords.push_back(p[i]);
    return coords;
}

namespace {

Json tuple_json(const std::vector<LatticePoint>& tuple, int dim) {
    Json arr = Json::array();
    for (const auto& t : tuple) arr.push_back(to_json(t, dim));
    return arr;
}

} // namespace

Json to_json(const MomentReport& r, int dim) {
    Json breakdown = Json::array();
    for (const auto& row : r.breakdown)
        breakdown.push_back({{"kernel", to_json(row.kernel)},
                             {"contribution", row.contribution},
                             {"assignments", row.assignments}});
    return {{"tuple", tuple_json(r.tuple, dim)},
            {"value", r.value},
            {"assignments", r.assignments},
            {"breakdown", breakdown}};
}

Json to_json(const SeparationCertificate& c, int dim) {
    return {{"tuple", tuple_json(c.tuple, dim)},
            {"radius", c.radius},
            {"partition", to_json(c.partition)},
            {"full_moment", c.full_moment},
            {"block_product", c.block_product},
            {"lhs", c.lhs},
            {"c_k", c.c_k},
            {"gamma_a", c.gamma_a},
            {"rhs", c.rhs},
            {"holds", c.holds}};
}

Json to_json(const LongRunVariance& v) {
    Json partials = Json::array();
    for (const auto& [n, value] : v.partials) partials.push_back({{"n", n}, {"value", value}});
    Json out{{"partials", partials}, {"value", v.value()}};
    if (v.closed_form) out["closed_form"] = *v.closed_form;
    if (v.extrapolated) out["extrapolated"] = *v.extrapolated;
    return out;
}

Json to_json(const CountingLemmaReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"partition", to_json(row.partition)},
                        {"count", row.count},
                        {"bound_blocks", row.bound_blocks},
                        {"bound_coarse", row.bound_coarse},
                        {"holds", row.holds}});
    return {{"k", r.k},
            {"radius", r.radius},
            {"space_size", r.space_size},
            {"max_ball", r.max_ball},
            {"rows", rows},
            {"all_hold", r.all_hold}};
}

Json to_json(const CltReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json moments = Json::array();
        for (const auto& m : row.moments)
            moments.push_back({{"k", m.k},
                               {"value", m.value},
                               {"target", m.target},
                               {"std_err", m.std_err},
                               {"asserted", m.asserted},
                               {"pass", m.pass}});
        rows.push_back({{"n", row.n},
                        {"points", row.points},
                        {"replications", row.replications},
                        {"seed", row.seed},
                        {"attempt", row.attempt},
                        {"moments", moments},
                        {"ks", row.ks},
                        {"ks_critical", row.ks_critical},
                        {"max_abs_sum", row.max_abs_sum},
                        {"second_moment_exact", row.second_moment_exact},
                        {"degenerate", row.degenerate},
                        {"pass", row.pass},
                        {"wall_seconds", row.wall_seconds}});
    }
    return {{"sigma2", r.sigma2_value}, {"rows", rows}, {"all_pass", r.all_pass}};
}

Json to_json(const MixingProfile& p) {
    Json rows = Json::array();
    for (const auto& row : p.rows) rows.push_back({{"d", row.d}, {"alpha", row.alpha}});
    return {{"base_window", p.base_window},
            {"probe_shape", p.probe_shape},
            {"rows", rows},
            {"note", "window-restricted lower bound for the process-level coefficient"}};
}

Json to_json(const MixingLemmaReport& r) {
    return {{"lhs", r.lhs},       {"rhs", r.rhs},     {"moment_cap", r.moment_cap},
            {"gaps", r.gaps},     {"alphas", r.alphas}, {"holds", r.holds}};
}

Json to_json(const ConditionDiagnostics& d) {
    Json rows = Json::array();
    for (const auto& row : d.rows) {
        Json grid = Json::array();
        for (const auto& [n, value] : row.grid) grid.push_back({{"n", n}, {"value", value}});
        rows.push_back({{"condition", row.condition},
                        {"params", row.params},
                        {"verdict", row.verdict},
                        {"grid", grid},
                        {"note", row.note}});
    }
    return {{"rows", rows}, {"any_fail", d.any_fail}};
}

Json to_json(const DecayBoundReport& r) {
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"ell", r.ell},
            {"block_size", r.block_size},
            {"holds", r.holds}};
}

} // namespace cltlab
