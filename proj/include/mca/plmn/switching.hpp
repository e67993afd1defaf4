#pragma once

#include <optional>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/sim/engine.hpp"

namespace mca {

/// Switch cost breakdown: T_switch = sum(per_cell_scan) + attach + overhead.
struct SwitchTiming {
    int n_t = 0;
    std::vector<double> per_cell_scan;  // T_t of each scanned target cell
    double scan_cost = 0.0;
    double attach = 0.0;
    double overhead = 0.0;
    std::optional<AttachTarget> target;

    double t_switch_min() const { return attach; }
    double t_switch() const { return scan_cost + attach + overhead; }
};

/// Legacy selection starts only when service is gone, never on weak signal.
bool baseline_trigger(const DeviceState& device, const CellularEvent& event);

/// Every cell of every network, priority-list order then band order. Each
/// cell is measured when its own scan finishes, starting at t0.
ScanResult exhaustive_scan(const Scenario& sc, double t0);

/// First network of the list with an available, unbarred cell in the scan.
std::optional<NetworkId> preference_select(const ScanResult& scan, const std::vector<NetworkId>& priority);

/// Strongest available unbarred cell of a scanned network (ties: smallest id).
std::optional<CellId> attach_cell(const NetworkScan& net);

/// Timing of a direct switch to `target`, attaching to `cell`.
SwitchTiming direct_switch_timing(const Scenario& sc, const NetworkId& target, const CellId& cell);

/// Legacy hard switch after an exhaustive scan: tries preference candidates
/// in order, reusing the one scan.
SwitchTiming hard_switch(Engine& engine, const ScanResult& scan, const std::vector<NetworkId>& priority);

/// Direct inter-carrier switch; only the target's cells are scanned.
/// Throws TARGET_NOT_SCANNED (no state change) when `scan` has no usable cell
/// of the target.
SwitchTiming direct_switch(Engine& engine, const ScanResult& scan, const NetworkId& target);

/// Observer running the device's built-in selection on every loss of service:
/// intra-carrier RAT fallback when possible, exhaustive scan otherwise.
class LegacySelection {
public:
    void operator()(Engine& engine, const CellularEvent& ev);
    const std::vector<ScanResult>& scans() const { return scans_; }

private:
    std::vector<ScanResult> scans_;
};

}  // namespace mca
