#pragma once

#include <string>
#include <vector>

// Single-header nlohmann/json from vendor/.
#include <json.hpp>

#include "cltlab/clt_harness.hpp"
#include "cltlab/diagnostics.hpp"
#include "cltlab/moment_engine.hpp"

namespace cltlab {

using Json = nlohmann::json;

/// Shortest exact decimal for a double; the same bytes on every run.
std::string fmt_double(double v);

/// RFC-4180 style cell quoting (only when needed).
std::string csv_cell(const std::string& raw);

/// Deterministic CSV assembly: fixed columns, '\n' line ends.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void row(const std::vector<std::string>& cells);
    const std::string& str() const { return out_; }

private:
    std::size_t width_;
    std::string out_;
};

Json to_json(const Partition& p);                ///< sorted list-of-lists, 1-based
Json to_json(const LatticePoint& p, int dim);
Json to_json(const MomentReport& r, int dim);
Json to_json(const SeparationCertificate& c, int dim);
Json to_json(const LongRunVariance& v);
Json to_json(const CountingLemmaReport& r);
Json to_json(const CltReport& r);
Json to_json(const MixingProfile& p);
Json to_json(const MixingLemmaReport& r);
Json to_json(const ConditionDiagnostics& d);
Json to_json(const DecayBoundReport& r);

} // namespace cltlab
