#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bramble/domain.hpp"
#include "bramble/verify.hpp"

namespace bramble {

/// Version written into every CSV and JSON report.
inline constexpr int kSchemaVersion = 1;

/// One header comment carrying the schema version, one column header, then
/// one row per report. Reals use the shortest round-trip representation.
void write_csv(std::ostream& out, const std::vector<BoundReport>& reports);
std::vector<BoundReport> read_csv(std::istream& in);

nlohmann::json to_json(const BoundReport& report);
BoundReport bound_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ConstantEstimate& estimate);
ConstantEstimate constant_estimate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChunkinessReport& report, const Domain& domain);
nlohmann::json to_json(const FunctionalReport& report);

/// {"schema_version", "kind": "constant-sweep", "config", "constants": [...]}
nlohmann::json sweep_summary(const std::vector<ConstantEstimate>& constants, const nlohmann::json& config);
std::vector<ConstantEstimate> read_sweep_summary(const nlohmann::json& summary);

/// {"schema_version", "kind": "bound-reports", "reports": [...]}
nlohmann::json reports_document(const std::vector<BoundReport>& reports);
std::vector<BoundReport> read_reports_document(const nlohmann::json& document);

std::string format_real(double x);

}  // namespace bramble
