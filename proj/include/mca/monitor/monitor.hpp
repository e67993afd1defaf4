#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/sim/engine.hpp"

namespace mca {

struct MonitorRequest {
    std::vector<NetworkId> requested_networks;
    bool disruption_avoidance = true;
};

struct PlannedCell {
    CellId cell_id;
    NetworkId network;
    double scan_time = 0.0;
    std::vector<Interval> slots;
    bool operator==(const PlannedCell&) const = default;
};

/// Cells to scan in order. A skeleton has no slots yet.
struct ScanPlan {
    std::vector<PlannedCell> cells;
    std::vector<NetworkId> networks;  // request order; scanning ends once all are covered

    std::size_t slot_count() const;
    double total_scan_time() const;
    bool operator==(const ScanPlan&) const = default;
};

/// Periods in which the device must stay on its own frequency.
struct TrafficState {
    std::vector<Interval> busy;
    double horizon = 0.0;
};

/// Cells of the requested networks only, request order then band order.
/// Throws UNKNOWN_NETWORK for a network the scenario does not define.
ScanPlan minimal_search_filter(const MonitorRequest& request, const Scenario& sc);

/// Greedy-earliest packing of each cell's scan time into sleep windows that
/// avoid busy periods; a scan cut at a window edge resumes in the next one.
/// Cells that cannot finish before the horizon are dropped. Throws
/// NO_SLEEP_WINDOW when nothing can be placed at all.
ScanPlan schedule_scan_slots(const ScanPlan& skeleton, const SibConfig& sib, const TrafficState& traffic,
                             double from_t);

/// Back-to-back scanning from from_t, ignoring paging and traffic.
ScanPlan schedule_back_to_back(const ScanPlan& skeleton, double from_t, double horizon);

/// Busy periods of a workload for a device sitting on a cell with `sib`:
/// each flow from its first delivery opportunity to its end plus the tail.
std::vector<Interval> traffic_busy_intervals(const TrafficWorkload& workload, const SibConfig& sib,
                                             double inactivity_tail, double horizon);

struct SlotLogRecord {
    CellId cell;
    Interval window;
    double elapsed = 0.0;
};
struct CallbackLogRecord {
    double time = 0.0;
    bool partial = false;
    std::vector<NetworkId> networks;
};
struct MonitorLog {
    std::vector<SlotLogRecord> slots;
    std::vector<CallbackLogRecord> callbacks;
};

/// Returns true when the strategy committed a switch; scanning then stops.
using MonitorCallback = std::function<bool(Engine&, const ScanResult&)>;

/// One monitoring pass running on the engine's event loop.
class MonitorSession {
public:
    /// Plans and schedules the scan. Throws MONITOR_REENTRY if a scan is
    /// already running, NO_SLEEP_WINDOW when avoidance leaves no room.
    static std::shared_ptr<MonitorSession> start(Engine& engine, const MonitorRequest& request,
                                                 MonitorCallback callback, MonitorLog* log = nullptr);

    bool finished(const Engine& engine) const;
    const ScanResult& result() const { return result_; }
    const ScanPlan& plan() const { return plan_; }
    int callbacks() const { return callbacks_; }

private:
    void on_cell(Engine& engine, const ScanEntry& entry);

    ScanPlan plan_;
    MonitorCallback callback_;
    MonitorLog* log_ = nullptr;
    std::uint64_t scan_gen_ = 0;
    bool done_ = false;
    int callbacks_ = 0;
    std::vector<std::vector<std::optional<ScanEntry>>> pending_;  // per requested network
    ScanResult result_;
};

/// Blocking form: runs the engine until the session ends and returns the last result.
ScanResult monitor(Engine& engine, const MonitorRequest& request, MonitorCallback callback,
                   MonitorLog* log = nullptr);

}  // namespace mca
