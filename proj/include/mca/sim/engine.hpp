#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/sim/delivery.hpp"
#include "mca/sim/events.hpp"

namespace mca {

class Engine;

enum class RrcMode { kAwake, kSleep, kOffFrequency };
std::string_view to_string(RrcMode m);

struct DeviceState {
    std::optional<NetworkId> registered;
    std::optional<CellId> serving_cell;
    RrcMode rrc_mode = RrcMode::kSleep;
    bool active_uplink = false;
    double clock = 0.0;
};

enum class SwitchKind { kBaseline, kDirect, kIntraRat };
std::string_view to_string(SwitchKind k);

struct AttachTarget {
    NetworkId network;
    CellId cell;
    bool operator==(const AttachTarget&) const = default;
};

/// A deregister-scan-attach sequence. Targets are tried in order; an empty
/// list models a selection pass that found nothing to attach to.
struct SwitchPlan {
    SwitchKind kind = SwitchKind::kDirect;
    std::vector<AttachTarget> targets;
    int n_t = 0;
    double scan_cost = 0.0;
    double overhead = 0.0;
    bool validate_first = false;  // reject a barred/unavailable first target up front
};

struct SwitchRecord {
    double t_start = 0.0;
    double t_end = 0.0;
    std::optional<NetworkId> from;
    std::optional<NetworkId> to;
    SwitchKind kind = SwitchKind::kDirect;
    int n_t = 0;
    double scan_cost = 0.0;
    double attach_cost = 0.0;
    double overhead = 0.0;
    int attempts = 0;
    bool success = false;

    double disruption() const { return t_end - t_start; }
    bool operator==(const SwitchRecord&) const = default;
};

/// What begin_switch scheduled: when the device will be back and where.
struct ScheduledSwitch {
    double t_end = 0.0;
    std::optional<AttachTarget> target;
    double attach_cost = 0.0;
    int attempts = 0;
};

namespace sim {
struct PagingOccasion { std::uint64_t reg_gen = 0; };
struct MeasurementTick {};
struct FlowArrival { std::size_t flow = 0; };
struct FlowEnd { std::size_t flow = 0; };
struct ScanSlotStart { std::uint64_t scan_gen = 0; CellId cell; };
struct ScanSlotEnd { std::uint64_t scan_gen = 0; CellId cell; bool completes = false; };
struct AttachComplete { std::uint64_t switch_gen = 0; };
struct ServiceLoss { std::uint64_t reg_gen = 0; };
struct Callback { std::function<void(Engine&)> fn; };
}  // namespace sim

using SimEventBody = std::variant<sim::PagingOccasion, sim::MeasurementTick, sim::FlowArrival, sim::FlowEnd,
                                  sim::ScanSlotStart, sim::ScanSlotEnd, sim::AttachComplete, sim::ServiceLoss,
                                  sim::Callback>;

struct SimEvent {
    double time = 0.0;
    SimEventBody body;
};

/// Slots assigned to one cell; the cell's measurement is taken when its last slot ends.
struct CellSlots {
    CellId cell;
    std::vector<Interval> slots;
};

/// Single-threaded discrete-event model of the network side and the device
/// radio. Events at equal times run in insertion order.
class Engine {
public:
    struct Options {
        std::optional<double> horizon;       // default: scenario end time
        double measurement_interval = 1.0;   // serving-cell measurement and reselection period
        bool paging = true;                  // simulate paging occasions
        bool network_reselection = true;
    };
    using Observer = std::function<void(Engine&, const CellularEvent&)>;
    using ScanListener = std::function<void(Engine&, const ScanEntry&)>;

    explicit Engine(std::shared_ptr<const Scenario> scenario);
    Engine(std::shared_ptr<const Scenario> scenario, Options options);

    const Scenario& scenario() const { return *scenario_; }
    const DeviceState& state() const { return state_; }
    double now() const { return state_.clock; }
    double horizon() const { return horizon_; }

    /// Queues initial registration, flows and periodic measurement.
    void start();

    /// Pops and processes the next queued event. Returns the cellular events
    /// it produced (observers' reactions included); empty when idle.
    std::vector<CellularEvent> step();
    /// Processes an externally supplied event; throws CLOCK_REGRESSION if it
    /// lies before the current clock.
    std::vector<CellularEvent> step(const SimEvent& ev);
    /// Processes every queued event with time <= t (and before the horizon),
    /// then advances the clock to t.
    void run_until(double t);
    void run() { run_until(horizon_); }
    bool idle() const;

    void schedule(double t, SimEventBody body);
    void schedule_callback(double t, std::function<void(Engine&)> fn) { schedule(t, sim::Callback{std::move(fn)}); }
    void add_observer(Observer obs) { observers_.push_back(std::move(obs)); }

    /// Detaches (0 s), then after scan_cost + overhead attaches to the first
    /// target whose attach succeeds. Cancels any running scan.
    ScheduledSwitch begin_switch(const SwitchPlan& plan);
    /// Plain attach to one cell: duration = attach_time + platform_overhead.
    ScheduledSwitch attach(const CellId& cell);
    bool switch_in_progress() const { return switch_.has_value(); }
    /// Zero-cost registration change used by the ideal reference strategy.
    void teleport(const std::optional<NetworkId>& network);

    /// Schedules off-frequency scan slots. Returns the scan generation.
    std::uint64_t begin_scan(const std::vector<CellSlots>& plan, ScanListener listener);
    void cancel_scan();
    bool scan_active() const { return scan_active_; }
    std::uint64_t scan_generation() const { return scan_gen_; }

    const std::vector<CellularEvent>& event_log() const { return log_; }
    const std::vector<SwitchRecord>& switch_log() const { return switches_; }
    DeviceTimeline timeline() const;
    std::vector<DeliveryRecord> deliveries() const;
    /// Time within [0, horizon) spent without registration.
    double unregistered_time() const;

private:
    struct Queued {
        double time;
        std::uint64_t seq;
        SimEventBody body;
    };
    struct Later {
        bool operator()(const Queued& a, const Queued& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };
    struct PendingSwitch {
        SwitchRecord record;
        std::optional<AttachTarget> target;
        std::uint64_t gen = 0;
    };

    std::vector<CellularEvent> dispatch(double time, const SimEventBody& body);
    void emit(EventPayload payload);
    void handle(const sim::PagingOccasion& ev);
    void handle(const sim::MeasurementTick& ev);
    void handle(const sim::FlowArrival& ev);
    void handle(const sim::FlowEnd& ev);
    void handle(const sim::ScanSlotStart& ev);
    void handle(const sim::ScanSlotEnd& ev);
    void handle(const sim::AttachComplete& ev);
    void handle(const sim::ServiceLoss& ev);
    void handle(const sim::Callback& ev);

    void register_on(const AttachTarget& target, bool announce);
    void deregister();
    void set_serving_cell(const CellId& cell);
    void close_span();
    void refresh_mode();
    void start_flow(std::size_t idx);
    bool awake_for_paging() const;

    std::shared_ptr<const Scenario> scenario_;
    Options options_;
    double horizon_ = 0.0;
    DeviceState state_;
    std::priority_queue<Queued, std::vector<Queued>, Later> queue_;
    std::uint64_t seq_ = 0;
    bool dispatching_ = false;

    std::vector<Observer> observers_;
    std::vector<CellularEvent> log_;
    std::size_t notify_cursor_ = 0;

    std::uint64_t reg_gen_ = 0;
    std::optional<PendingSwitch> switch_;
    std::uint64_t switch_gen_ = 0;
    std::vector<SwitchRecord> switches_;
    std::mt19937_64 rng_;

    bool scan_active_ = false;
    std::uint64_t scan_gen_ = 0;
    ScanListener scan_listener_;
    std::size_t scan_cells_left_ = 0;
    std::optional<double> off_since_;
    std::vector<Interval> off_frequency_;

    std::vector<ServingSpan> spans_;
    std::optional<ServingSpan> open_span_;

    std::vector<std::size_t> pending_downlink_;
    int active_flows_ = 0;
    int active_uplinks_ = 0;
};

}  // namespace mca
