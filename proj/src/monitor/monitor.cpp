#include "mca/monitor/monitor.hpp"

#include <algorithm>
#include <limits>

#include "mca/core/error.hpp"
#include "mca/sim/delivery.hpp"
#include "mca/sim/drx.hpp"

namespace mca {

namespace {
// Leftover scan time below this is rounding noise, not another slot.
constexpr double kSlotEps = 1e-12;
}

std::size_t ScanPlan::slot_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.slots.size();
    return n;
}

double ScanPlan::total_scan_time() const {
    double t = 0.0;
    for (const auto& c : cells) t += c.scan_time;
    return t;
}

ScanPlan minimal_search_filter(const MonitorRequest& request, const Scenario& sc) {
    ScanPlan plan;
    for (const auto& net : request.requested_networks) {
        if (!sc.has_network(net)) throw Error(Errc::UnknownNetwork, "requested network " + net + " does not exist");
        if (std::find(plan.networks.begin(), plan.networks.end(), net) != plan.networks.end()) continue;
        plan.networks.push_back(net);
        for (const auto& c : sc.cells_in_band_order(net)) plan.cells.push_back({c, net, sc.cell(c).scan_time, {}});
    }
    return plan;
}

ScanPlan schedule_scan_slots(const ScanPlan& skeleton, const SibConfig& sib, const TrafficState& traffic,
                             double from_t) {
    std::vector<Interval> busy = traffic.busy;
    std::sort(busy.begin(), busy.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });

    // Next free stretch [s, e) at or after t, or nullopt past the horizon.
    auto next_free = [&](double t) -> std::optional<Interval> {
        while (t < traffic.horizon) {
            const Interval w = paging_schedule(sib, t);
            double s = std::max(t, w.start);
            double e = w.end;
            bool blocked = false;
            for (const auto& b : busy) {
                if (b.end <= s) continue;
                if (b.start >= e) break;
                if (b.start <= s) {
                    t = b.end;  // s is inside a busy period
                    blocked = true;
                    break;
                }
                e = b.start;
                break;
            }
            if (blocked) continue;
            e = std::min(e, traffic.horizon);
            if (e - s > kSlotEps) return Interval{s, e};
            t = w.end;
        }
        return std::nullopt;
    };

    ScanPlan out;
    out.networks = skeleton.networks;
    double t = from_t;
    for (const auto& pc : skeleton.cells) {
        PlannedCell cell = pc;
        cell.slots.clear();
        double remaining = pc.scan_time;
        double cursor = t;
        bool fits = true;
        while (remaining > kSlotEps) {
            auto free = next_free(cursor);
            if (!free) {
                fits = false;
                break;
            }
            const double take = std::min(remaining, free->end - free->start);
            cell.slots.push_back({free->start, free->start + take});
            remaining -= take;
            cursor = free->start + take;
        }
        if (!fits) break;  // later cells cannot finish either
        t = cursor;
        out.cells.push_back(std::move(cell));
    }
    if (out.cells.empty() && !skeleton.cells.empty())
        throw Error(Errc::NoSleepWindow, "no sleep window free of traffic before the horizon");
    return out;
}

ScanPlan schedule_back_to_back(const ScanPlan& skeleton, double from_t, double horizon) {
    ScanPlan out;
    out.networks = skeleton.networks;
    double t = from_t;
    for (const auto& pc : skeleton.cells) {
        if (t + pc.scan_time > horizon) break;
        PlannedCell cell = pc;
        cell.slots = {{t, t + pc.scan_time}};
        t += pc.scan_time;
        out.cells.push_back(std::move(cell));
    }
    return out;
}

std::vector<Interval> traffic_busy_intervals(const TrafficWorkload& workload, const SibConfig& sib,
                                             double inactivity_tail, double horizon) {
    DeviceTimeline tl;
    tl.serving = {{{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}, sib}};
    tl.horizon = horizon;
    tl.inactivity_tail = inactivity_tail;
    auto busy = flow_activity_intervals(workload, tl);
    // Uplink data can start at any instant, so the device is busy from arrival.
    for (const auto& f : workload)
        if (f.direction == Direction::kUplink)
            busy.push_back({f.arrival_time, f.arrival_time + f.duration + inactivity_tail});
    return busy;
}

// ---------------------------------------------------------------------------

std::shared_ptr<MonitorSession> MonitorSession::start(Engine& engine, const MonitorRequest& request,
                                                      MonitorCallback callback, MonitorLog* log) {
    if (engine.scan_active()) throw Error(Errc::MonitorReentry, "a monitoring pass is already running");
    const Scenario& sc = engine.scenario();
    const ScanPlan skeleton = minimal_search_filter(request, sc);

    auto session = std::shared_ptr<MonitorSession>(new MonitorSession());
    const auto& dev = engine.state();
    if (request.disruption_avoidance && dev.serving_cell) {
        const SibConfig& sib = sc.cell(*dev.serving_cell).sib;
        TrafficState traffic{traffic_busy_intervals(sc.workload, sib, sc.device.inactivity_tail, engine.horizon()),
                             engine.horizon()};
        session->plan_ = schedule_scan_slots(skeleton, sib, traffic, engine.now());
    } else {
        session->plan_ = schedule_back_to_back(skeleton, engine.now(), engine.horizon());
    }
    session->callback_ = std::move(callback);
    session->log_ = log;
    session->result_.partial = true;
    for (const auto& net : session->plan_.networks)
        session->pending_.emplace_back(sc.network(net).cells.size());

    std::vector<CellSlots> slots;
    for (const auto& pc : session->plan_.cells) {
        slots.push_back({pc.cell_id, pc.slots});
        if (log) {
            double elapsed = 0.0;
            for (const auto& s : pc.slots) {
                elapsed += s.length();
                log->slots.push_back({pc.cell_id, s, elapsed});
            }
        }
    }
    std::weak_ptr<MonitorSession> weak = session;
    session->scan_gen_ = engine.begin_scan(slots, [weak](Engine& e, const ScanEntry& entry) {
        if (auto s = weak.lock()) s->on_cell(e, entry);
    });
    if (session->plan_.cells.empty()) session->done_ = true;
    return session;
}

bool MonitorSession::finished(const Engine& engine) const {
    return done_ || engine.scan_generation() != scan_gen_ || !engine.scan_active();
}

void MonitorSession::on_cell(Engine& engine, const ScanEntry& entry) {
    if (done_) return;
    const Scenario& sc = engine.scenario();
    const NetworkId& net = sc.cell(entry.cell_id).network;
    const auto it = std::find(plan_.networks.begin(), plan_.networks.end(), net);
    if (it == plan_.networks.end()) return;
    const std::size_t ni = static_cast<std::size_t>(it - plan_.networks.begin());

    // Keep entries in band order inside each network.
    const auto order = sc.cells_in_band_order(net);
    const std::size_t ci = static_cast<std::size_t>(std::find(order.begin(), order.end(), entry.cell_id) - order.begin());
    pending_[ni][ci] = entry;
    result_.elapsed += sc.cell(entry.cell_id).scan_time;
    ++result_.cells_scanned;

    const bool network_done =
        std::all_of(pending_[ni].begin(), pending_[ni].end(), [](const auto& e) { return e.has_value(); });
    if (!network_done) return;

    NetworkScan ns{net, {}};
    for (const auto& e : pending_[ni]) ns.cells.push_back(*e);
    result_.networks.push_back(std::move(ns));
    result_.partial = result_.networks.size() < plan_.networks.size();

    ++callbacks_;
    if (log_) {
        CallbackLogRecord rec{engine.now(), result_.partial, {}};
        for (const auto& n : result_.networks) rec.networks.push_back(n.network_id);
        log_->callbacks.push_back(std::move(rec));
    }
    const bool committed = callback_ ? callback_(engine, result_) : false;
    if (committed) {
        done_ = true;
        if (engine.scan_generation() == scan_gen_) engine.cancel_scan();
    }
    if (!result_.partial) done_ = true;
}

ScanResult monitor(Engine& engine, const MonitorRequest& request, MonitorCallback callback, MonitorLog* log) {
    auto session = MonitorSession::start(engine, request, std::move(callback), log);
    while (!session->finished(engine) && !engine.idle()) engine.step();
    return session->result();
}

}  // namespace mca
