#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "goest/sweep.hpp"

namespace goest {

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_string(const std::string& s);

/// One row per level: level, h, n_dofs, J_uh, true_error, eta1, eta2, eta3,
/// remainder, eff1, eff2, eff3, b_h, reliability_ok. Reals use 17
/// significant digits; missing values are empty fields.
void write_csv(const SweepReport& r, std::ostream& out);
std::string to_csv(const SweepReport& r);

nlohmann::json to_json(const SweepReport& r);
SweepReport sweep_from_json(const nlohmann::json& doc);

/// Writes the report to path; throws std::runtime_error naming the path on
/// I/O failure.
void emit_report(const SweepReport& r, ReportFormat format, const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double ("%.17g").
std::string format_real(double v);

}  // namespace goest
