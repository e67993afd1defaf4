#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mca {

enum class Errc {
    // scenario
    ParseError,
    DuplicateId,
    DanglingReference,
    NonMonotoneTrace,
    EmptyNetwork,
    MissingTrace,
    InvalidValue,
    UnknownCell,
    UnknownNetwork,
    // environment
    ClockRegression,
    CellBarred,
    CellUnavailable,
    AttachFailed,
    SwitchInProgress,
    // monitoring
    NoSleepWindow,
    MonitorReentry,
    TargetNotScanned,
    // prediction
    EmptySamples,
    EmptyTree,
    // strategies
    StrategyException,
    MissingProfile,
    MissingPlan,
    UnknownStrategy,
    // harness
    InvalidScenario,
    LengthMismatch,
    ScenarioMismatch,
    IoFailure,
    UnknownFormat,
};

std::string_view to_string(Errc code);

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace mca
