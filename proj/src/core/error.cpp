#include "mca/core/error.hpp"

namespace mca {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::ParseError: return "PARSE_ERROR";
        case Errc::DuplicateId: return "DUPLICATE_ID";
        case Errc::DanglingReference: return "DANGLING_REFERENCE";
        case Errc::NonMonotoneTrace: return "NON_MONOTONE_TRACE";
        case Errc::EmptyNetwork: return "EMPTY_NETWORK";
        case Errc::MissingTrace: return "MISSING_TRACE";
        case Errc::InvalidValue: return "INVALID_VALUE";
        case Errc::UnknownCell: return "UNKNOWN_CELL";
        case Errc::UnknownNetwork: return "UNKNOWN_NETWORK";
        case Errc::ClockRegression: return "CLOCK_REGRESSION";
        case Errc::CellBarred: return "CELL_BARRED";
        case Errc::CellUnavailable: return "CELL_UNAVAILABLE";
        case Errc::AttachFailed: return "ATTACH_FAILED";
        case Errc::SwitchInProgress: return "SWITCH_IN_PROGRESS";
        case Errc::NoSleepWindow: return "NO_SLEEP_WINDOW";
        case Errc::MonitorReentry: return "MONITOR_REENTRY";
        case Errc::TargetNotScanned: return "TARGET_NOT_SCANNED";
        case Errc::EmptySamples: return "EMPTY_SAMPLES";
        case Errc::EmptyTree: return "EMPTY_TREE";
        case Errc::StrategyException: return "STRATEGY_EXCEPTION";
        case Errc::MissingProfile: return "MISSING_PROFILE";
        case Errc::MissingPlan: return "MISSING_PLAN";
        case Errc::UnknownStrategy: return "UNKNOWN_STRATEGY";
        case Errc::InvalidScenario: return "INVALID_SCENARIO";
        case Errc::LengthMismatch: return "LENGTH_MISMATCH";
        case Errc::ScenarioMismatch: return "SCENARIO_MISMATCH";
        case Errc::IoFailure: return "IO_FAILURE";
        case Errc::UnknownFormat: return "UNKNOWN_FORMAT";
    }
    return "UNKNOWN";
}

}  // namespace mca
