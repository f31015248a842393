#pragma once

// Machine-readable report files. JSON carries every field and round-trips
// exactly. CSV has a fixed column order, a mandatory header row and
// probabilities printed with 6 fractional digits; parsing a CSV file and
// writing it again reproduces the same bytes.

#include <string>
#include <vector>

#include "json.hpp"

#include "qsdc/experiment.hpp"

namespace qsdc::io {

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

std::string to_csv(const ExperimentReport& report);
ExperimentReport report_from_csv(const std::string& text);

nlohmann::json to_json(const std::vector<CurveRow>& rows);
std::vector<CurveRow> curve_from_json(const nlohmann::json& j);

/// Columns: overall A-B and decoy detection plus the Z-basis A-B and
/// X-family decoy subsets.
std::string to_csv(const std::vector<CurveRow>& rows);
std::vector<CurveRow> curve_from_csv(const std::string& text);

nlohmann::json to_json(const OracleVerdict& verdict);

/// Fixed-point formatting with 6 fractional digits.
std::string format_probability(double p);

} // namespace qsdc::io
