#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mca/core/error.hpp"
#include "mca/core/types.hpp"

namespace mca {

struct ValidationIssue {
    Errc code;
    std::string entity;  // offending id
    std::string message;
};

struct ValidationResult {
    std::optional<Scenario> scenario;  // set iff issues is empty
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
};

/// Checks every structural invariant of a parsed scenario and reports all
/// violations. A valid scenario is returned unchanged (and indexed).
ValidationResult validate_scenario(Scenario raw);

/// Earliest time in [t0, t1] at which every cell of `net` is below the
/// service floor, or nullopt if the network stays available throughout.
std::optional<double> first_unavailable_time(const Scenario& sc, const NetworkId& net, double t0, double t1);

// JSON document <-> Scenario. Field names follow the domain type fields.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::ordered_json scenario_to_json(const Scenario& sc);

/// Reads and parses a scenario file; throws Error(ParseError / IoFailure).
Scenario load_scenario_file(const std::filesystem::path& path);

/// Reads, parses and validates; throws Error(InvalidScenario) listing every issue.
Scenario load_valid_scenario(const std::filesystem::path& path);

std::string format_issues(const std::vector<ValidationIssue>& issues);

}  // namespace mca
