#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mca {

using NetworkId = std::string;
using CellId = std::string;

inline constexpr double kDefaultServiceFloor = -140.0;  // dBm

enum class Rat { k4G, k3G };
enum class Direction { kUplink, kDownlink };
enum class Metric { kLatency, kThroughput };

/// 3GPP QoS traffic classes in descending priority.
enum class TrafficClass { kConversational = 0, kStreaming = 1, kInteractive = 2, kBackground = 3 };

std::string_view to_string(Rat rat);
std::string_view to_string(Direction dir);
std::string_view to_string(Metric metric);
std::string_view to_string(TrafficClass tc);
std::optional<Rat> parse_rat(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);
std::optional<Metric> parse_metric(std::string_view s);
std::optional<TrafficClass> parse_traffic_class(std::string_view s);

/// True when `a` is a better metric value than `b` (lower latency, higher throughput).
inline bool metric_better(Metric m, double a, double b) {
    return m == Metric::kLatency ? a < b : a > b;
}

/// Half-open time interval [start, end).
struct Interval {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
    bool contains(double t) const { return t >= start && t < end; }
    bool operator==(const Interval&) const = default;
};

struct SibConfig {
    bool barred = false;
    double paging_cycle = 1.0;  // s
    double on_duration = 0.1;   // s, awake head of each cycle
    int reselection_priority = 0;
    double reselection_threshold = -120.0;  // dBm
    bool voice_over_ps = true;

    bool operator==(const SibConfig&) const = default;
};

/// QoS parameters a network hands out in EPS/PDP context setup.
struct QosConfig {
    TrafficClass traffic_class = TrafficClass::kBackground;
    int delay_class = 4;
    double max_dl_rate = 0.0;  // Mbps
    double max_ul_rate = 0.0;  // Mbps
    double dl_gbr = 0.0;       // Mbps, 0 = best effort
    double ul_gbr = 0.0;

    bool operator==(const QosConfig&) const = default;
};

struct Cell {
    CellId cell_id;
    NetworkId network;
    std::string band;
    double scan_time = 0.4;    // s
    double attach_time = 2.6;  // s
    SibConfig sib;
    QosConfig qos;
    int tdd_config = 0;  // 0 = FDD / not applicable
    std::vector<Interval> barred_windows;

    bool operator==(const Cell&) const = default;
};

struct CarrierNetwork {
    NetworkId network_id;
    std::string plmn;
    Rat rat = Rat::k4G;
    std::vector<CellId> cells;

    bool operator==(const CarrierNetwork&) const = default;
};

struct TracePoint {
    double time = 0.0;
    double rss = 0.0;
    bool operator==(const TracePoint&) const = default;
};

/// Per-cell RSS breakpoints, linearly interpolated.
struct RadioTrace {
    std::map<CellId, std::vector<TracePoint>> cells;
    bool operator==(const RadioTrace&) const = default;
};

struct Flow {
    double arrival_time = 0.0;
    Direction direction = Direction::kDownlink;
    double duration = 0.0;
    bool operator==(const Flow&) const = default;
};

using TrafficWorkload = std::vector<Flow>;

/// Piecewise-linear value as a function of RSS, clamped at the ends.
struct Curve {
    std::vector<std::pair<double, double>> points;  // (rss dBm, value), rss increasing
    double at(double rss) const;
    bool operator==(const Curve&) const = default;
};

struct PerformanceModel {
    std::map<NetworkId, std::map<Metric, Curve>> networks;
    std::map<Metric, double> outage{{Metric::kLatency, 1000.0}, {Metric::kThroughput, 0.0}};

    double evaluate(const NetworkId& net, Metric metric, double rss) const;
    double outage_value(Metric metric) const;
    bool operator==(const PerformanceModel&) const = default;
};

/// Past registration observation used to warm the predictor.
struct HistoryRecord {
    NetworkId network;
    CellId cell;  // empty = strongest-configured cell of the network
    double rss = 0.0;
    double latency = 0.0;
    double throughput = 0.0;
    bool operator==(const HistoryRecord&) const = default;
};

struct BillingTier {
    double up_to = 0.0;  // GB, cumulative upper bound; infinity for the last tier
    double price = 0.0;  // per GB
    bool operator==(const BillingTier&) const = default;
};

struct BillingPlan {
    std::vector<BillingTier> tiers;
    double usage = 0.0;  // GB used this cycle
    bool operator==(const BillingPlan&) const = default;
};

struct ServiceRequirements {
    bool needs_voice = false;
    bool needs_data = true;
    bool operator==(const ServiceRequirements&) const = default;
};

struct DeviceConfig {
    std::optional<NetworkId> initial_registration;
    double inactivity_tail = 0.0;
    bool operator==(const DeviceConfig&) const = default;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 1;
    std::optional<double> horizon;
    double service_floor = kDefaultServiceFloor;
    double platform_overhead = 0.0;
    double attach_failure_probability = 0.0;

    std::vector<CarrierNetwork> networks;
    std::vector<Cell> cells;
    RadioTrace trace;
    TrafficWorkload workload;
    PerformanceModel performance;
    std::vector<NetworkId> plmn_priority_list;
    DeviceConfig device;
    std::vector<HistoryRecord> history;
    std::map<std::string, BillingPlan> billing;  // keyed by plmn
    ServiceRequirements requirements;

    bool operator==(const Scenario& o) const;

    // Lookups; throw Error(UnknownCell / UnknownNetwork).
    const Cell& cell(const CellId& id) const;
    const CarrierNetwork& network(const NetworkId& id) const;
    bool has_cell(const CellId& id) const;
    bool has_network(const NetworkId& id) const;

    double end_time() const;
    double rss(const CellId& cell, double t) const;
    bool cell_available(const CellId& cell, double t) const;
    /// SIB as broadcast at time t (barring windows applied).
    SibConfig sib_at(const CellId& cell, double t) const;
    /// Strongest cell RSS of a network, or nullopt when every cell is below the floor.
    std::optional<double> network_rss(const NetworkId& net, double t) const;
    std::optional<CellId> best_cell(const NetworkId& net, double t) const;
    bool network_available(const NetworkId& net, double t) const { return network_rss(net, t).has_value(); }

    /// Cells of a network in scan order (band, then cell id).
    std::vector<CellId> cells_in_band_order(const NetworkId& net) const;

    void reindex();

private:
    std::unordered_map<std::string, std::size_t> cell_index_;
    std::unordered_map<std::string, std::size_t> network_index_;
};

/// RSS at time t, linear between breakpoints and clamped outside them.
double rss_at(const RadioTrace& trace, const CellId& cell, double t);

// ---------------------------------------------------------------------------
// Scan results, shared by monitoring, switching and the fault guard.

struct ScanEntry {
    CellId cell_id;
    std::optional<double> rss;      // nullopt = unavailable
    std::optional<SibConfig> sib;   // nullopt = SIB not decoded
    double completed_at = 0.0;

    bool available() const { return rss.has_value(); }
    bool operator==(const ScanEntry&) const = default;
};

struct NetworkScan {
    NetworkId network_id;
    std::vector<ScanEntry> cells;

    std::optional<double> best_rss() const;
    const ScanEntry* best_entry() const;
    bool any_available() const { return best_rss().has_value(); }
    bool operator==(const NetworkScan&) const = default;
};

struct ScanResult {
    std::vector<NetworkScan> networks;
    bool partial = false;
    double elapsed = 0.0;  // summed scan time
    int cells_scanned = 0;

    const NetworkScan* find(const NetworkId& id) const;
    bool contains(const NetworkId& id) const { return find(id) != nullptr; }
    bool operator==(const ScanResult&) const = default;
};

}  // namespace mca
