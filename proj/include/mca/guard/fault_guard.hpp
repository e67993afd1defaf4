#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/predict/profile.hpp"

namespace mca {

enum class Verdict { kAllowed, kBarred, kIncompleteService, kMobilityConflict };
std::string_view to_string(Verdict v);

struct FaultVerdict {
    NetworkId network;
    Verdict verdict = Verdict::kAllowed;
    std::optional<NetworkId> final_network;  // set for MOBILITY_CONFLICT
    std::string detail;
    bool operator==(const FaultVerdict&) const = default;
};

struct GuardWarning {
    NetworkId network;
    std::string message;
    bool operator==(const GuardWarning&) const = default;
};

struct CheckResult {
    Verdict verdict = Verdict::kAllowed;
    std::optional<NetworkId> final_network;
    std::string detail;
    std::optional<GuardWarning> warning;
};

/// BARRED when every available cell broadcasts the barring flag; a cell
/// whose SIB1 was not decoded counts as barred.
CheckResult check_forbidden(const NetworkScan& candidate);

/// INCOMPLETE_SERVICE for a voice user on a 4G network that needs the
/// carrier's 3G for calls while no such 3G network is available in the scan.
CheckResult check_service_completeness(const NetworkScan& candidate, const Scenario& sc, const ProfileStore& profiles,
                                       const ScanResult& scan, const ServiceRequirements& req);

/// MOBILITY_CONFLICT when the carrier's own reselection rules would move the
/// device off the candidate right after it attaches (one step deep).
CheckResult check_mobility_coordination(const NetworkScan& candidate, const Scenario& sc,
                                        const ProfileStore& profiles, const ScanResult& scan);

struct GuardOutcome {
    ScanResult filtered;
    std::vector<FaultVerdict> verdicts;  // removals only
    std::vector<GuardWarning> warnings;
};

/// One verdict per scanned network (the registered network is always ALLOWED).
std::vector<FaultVerdict> evaluate_candidates(const ScanResult& scan, const Scenario& sc,
                                              const ProfileStore& profiles, const ServiceRequirements& req,
                                              const std::optional<NetworkId>& registered,
                                              std::vector<GuardWarning>* warnings = nullptr);

/// Drops every network that is not ALLOWED.
GuardOutcome filter_candidates(const ScanResult& scan, const Scenario& sc, const ProfileStore& profiles,
                               const ServiceRequirements& req, const std::optional<NetworkId>& registered);

}  // namespace mca
