#pragma once

#include <filesystem>
#include <string>

#include "disclose/scenario.hpp"

namespace disclose {

/// Parses the scenario JSON document. Parse failures are reported as
/// ScenarioError with 1-based line/column positions.
Scenario scenario_from_json(const std::string& text);

std::string scenario_to_json(const Scenario& s, int indent = 2);

/// Parse only; no validation.
Scenario read_scenario_file(const std::filesystem::path& path);

/// Parse + validate. Returns only when the report is clean; otherwise
/// throws ScenarioError carrying every finding.
Scenario load_scenario(const std::filesystem::path& path, double tol = kStochasticTol);

std::string format_findings(const ValidationReport& report);

}  // namespace disclose
