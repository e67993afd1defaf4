#include "mca/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mca/core/error.hpp"
#include "mca/core/scenario.hpp"
#include "mca/sim/drx.hpp"
#include "mca/sim/mobility.hpp"

namespace mca {

std::string_view to_string(RrcMode m) {
    switch (m) {
        case RrcMode::kAwake: return "AWAKE";
        case RrcMode::kSleep: return "SLEEP";
        case RrcMode::kOffFrequency: return "OFF_FREQUENCY";
    }
    return "UNKNOWN";
}

std::string_view to_string(SwitchKind k) {
    switch (k) {
        case SwitchKind::kBaseline: return "BASELINE";
        case SwitchKind::kDirect: return "DIRECT";
        case SwitchKind::kIntraRat: return "INTRA_RAT";
    }
    return "UNKNOWN";
}

Engine::Engine(std::shared_ptr<const Scenario> scenario) : Engine(std::move(scenario), Options{}) {}

Engine::Engine(std::shared_ptr<const Scenario> scenario, Options options)
    : scenario_(std::move(scenario)), options_(options), rng_(scenario_->seed) {
    horizon_ = options_.horizon.value_or(scenario_->end_time());
}

void Engine::start() {
    schedule_callback(0.0, [](Engine& e) {
        const auto& init = e.scenario().device.initial_registration;
        if (!init) {
            e.emit(OutOfServicePayload{std::nullopt, "not registered"});
            return;
        }
        auto cell = e.scenario().best_cell(*init, e.now());
        // With no usable cell the service-loss check fires right away.
        if (!cell) cell = e.scenario().cells_in_band_order(*init).front();
        e.register_on({*init, *cell}, true);
    });
    if (options_.measurement_interval > 0.0) schedule(0.0, sim::MeasurementTick{});
    for (std::size_t i = 0; i < scenario_->workload.size(); ++i)
        if (scenario_->workload[i].arrival_time < horizon_)
            schedule(scenario_->workload[i].arrival_time, sim::FlowArrival{i});
}

void Engine::schedule(double t, SimEventBody body) { queue_.push(Queued{t, seq_++, std::move(body)}); }

bool Engine::idle() const { return queue_.empty() || queue_.top().time >= horizon_; }

std::vector<CellularEvent> Engine::step() {
    if (idle()) return {};
    Queued q = queue_.top();
    queue_.pop();
    return dispatch(q.time, q.body);
}

std::vector<CellularEvent> Engine::step(const SimEvent& ev) { return dispatch(ev.time, ev.body); }

void Engine::run_until(double t) {
    while (!queue_.empty() && queue_.top().time <= t && queue_.top().time < horizon_) step();
    if (t > state_.clock) state_.clock = std::min(t, horizon_);
}

std::vector<CellularEvent> Engine::dispatch(double time, const SimEventBody& body) {
    if (time < state_.clock)
        throw Error(Errc::ClockRegression,
                    "event at " + std::to_string(time) + " precedes clock " + std::to_string(state_.clock));
    if (dispatching_) throw Error(Errc::ClockRegression, "nested step from inside an event handler");
    dispatching_ = true;
    state_.clock = time;
    const std::size_t first = log_.size();
    try {
        std::visit([this](const auto& ev) { handle(ev); }, body);
        // Observers may react by emitting further events; drain until quiet.
        while (notify_cursor_ < log_.size()) {
            const CellularEvent ev = log_[notify_cursor_++];
            for (auto& obs : observers_) obs(*this, ev);
        }
    } catch (...) {
        dispatching_ = false;
        throw;
    }
    dispatching_ = false;
    return {log_.begin() + static_cast<std::ptrdiff_t>(first), log_.end()};
}

void Engine::emit(EventPayload payload) { log_.push_back(CellularEvent{state_.clock, std::move(payload)}); }

// ---------------------------------------------------------------------------
// Registration bookkeeping

void Engine::close_span() {
    if (!open_span_) return;
    open_span_->span.end = state_.clock;
    if (open_span_->span.length() > 0.0) spans_.push_back(*open_span_);
    open_span_.reset();
}

void Engine::set_serving_cell(const CellId& cell) {
    if (state_.serving_cell == cell) return;
    close_span();
    state_.serving_cell = cell;
    open_span_ = ServingSpan{{state_.clock, std::numeric_limits<double>::infinity()}, scenario_->cell(cell).sib};
}

void Engine::register_on(const AttachTarget& target, bool announce) {
    const Cell& cell = scenario_->cell(target.cell);
    state_.registered = target.network;
    state_.serving_cell.reset();
    set_serving_cell(target.cell);
    ++reg_gen_;
    if (announce) {
        emit(AttachAcceptPayload{target.cell, target.network});
        emit(EpsPdpSetupPayload{target.cell, target.network, cell.qos});
        emit(RrcReconfigPayload{target.cell, target.network, cell.tdd_config, cell.sib.paging_cycle,
                                cell.sib.reselection_priority, cell.sib.reselection_threshold});
        emit(LocationUpdatePayload{target.cell, target.network, cell.sib.voice_over_ps});
    }
    if (auto lost = first_unavailable_time(*scenario_, target.network, state_.clock, horizon_))
        schedule(*lost, sim::ServiceLoss{reg_gen_});
    if (options_.paging) schedule(next_cycle_start(cell.sib, state_.clock), sim::PagingOccasion{reg_gen_});
    refresh_mode();
}

void Engine::deregister() {
    close_span();
    state_.registered.reset();
    state_.serving_cell.reset();
    ++reg_gen_;
    refresh_mode();
}

void Engine::refresh_mode() {
    if (off_since_)
        state_.rrc_mode = RrcMode::kOffFrequency;
    else
        state_.rrc_mode = active_flows_ > 0 ? RrcMode::kAwake : RrcMode::kSleep;
    state_.active_uplink = active_uplinks_ > 0;
}

// ---------------------------------------------------------------------------
// Switching

ScheduledSwitch Engine::begin_switch(const SwitchPlan& plan) {
    if (switch_) throw Error(Errc::SwitchInProgress, "a switch is already in progress");
    if (plan.validate_first && !plan.targets.empty()) {
        const CellId& c = plan.targets.front().cell;
        if (!scenario_->cell_available(c, state_.clock))
            throw Error(Errc::CellUnavailable, "cell " + c + " is below the service floor");
        if (scenario_->sib_at(c, state_.clock).barred) throw Error(Errc::CellBarred, "cell " + c + " is barred");
    }
    cancel_scan();

    PendingSwitch ps;
    ps.gen = ++switch_gen_;
    ps.record.t_start = state_.clock;
    ps.record.from = state_.registered;
    ps.record.kind = plan.kind;
    ps.record.n_t = plan.n_t;
    ps.record.scan_cost = plan.scan_cost;
    ps.record.overhead = plan.overhead;

    if (state_.registered) {
        emit(DetachPayload{*state_.registered});
        deregister();
    }

    std::bernoulli_distribution fail(std::clamp(scenario_->attach_failure_probability, 0.0, 1.0));
    double t = state_.clock + plan.scan_cost + plan.overhead;
    for (const auto& target : plan.targets) {
        const double a = scenario_->cell(target.cell).attach_time;
        t += a;
        ps.record.attach_cost += a;
        ++ps.record.attempts;
        const bool failed = scenario_->attach_failure_probability > 0.0 && fail(rng_);
        if (!failed) {
            ps.target = target;
            break;
        }
    }
    ps.record.t_end = t;
    ps.record.to = ps.target ? std::optional<NetworkId>(ps.target->network) : std::nullopt;
    ps.record.success = ps.target.has_value();

    ScheduledSwitch out{t, ps.target, ps.record.attach_cost, ps.record.attempts};
    schedule(t, sim::AttachComplete{ps.gen});
    switch_ = std::move(ps);
    return out;
}

ScheduledSwitch Engine::attach(const CellId& cell) {
    SwitchPlan plan;
    plan.kind = SwitchKind::kDirect;
    plan.targets = {{scenario_->cell(cell).network, cell}};
    plan.overhead = scenario_->platform_overhead;
    plan.validate_first = true;
    return begin_switch(plan);
}

void Engine::teleport(const std::optional<NetworkId>& network) {
    if (switch_) {
        switch_.reset();
        ++switch_gen_;
    }
    cancel_scan();
    if (!network) {
        if (state_.registered) deregister();
        return;
    }
    auto cell = scenario_->best_cell(*network, state_.clock);
    if (!cell) cell = scenario_->cells_in_band_order(*network).front();
    if (state_.registered == network) {
        set_serving_cell(*cell);
        return;
    }
    if (state_.registered) deregister();
    register_on({*network, *cell}, false);
}

void Engine::handle(const sim::AttachComplete& ev) {
    if (!switch_ || switch_->gen != ev.switch_gen) return;
    PendingSwitch ps = std::move(*switch_);
    switch_.reset();
    switches_.push_back(ps.record);
    if (ps.target) {
        register_on(*ps.target, true);
    } else {
        emit(OutOfServicePayload{std::nullopt, ps.record.attempts > 0 ? "attach failed" : "no suitable network"});
    }
}

void Engine::handle(const sim::ServiceLoss& ev) {
    if (ev.reg_gen != reg_gen_ || !state_.registered) return;
    const NetworkId lost = *state_.registered;
    cancel_scan();
    deregister();
    emit(OutOfServicePayload{lost, "service floor"});
}

// ---------------------------------------------------------------------------
// Measurement and idle-mode mobility

void Engine::handle(const sim::MeasurementTick&) {
    const double next = state_.clock + options_.measurement_interval;
    if (next < horizon_) schedule(next, sim::MeasurementTick{});
    if (!state_.registered || switch_) return;

    const Scenario& sc = *scenario_;
    const NetworkId net = *state_.registered;
    if (auto best = sc.best_cell(net, state_.clock); best && best != state_.serving_cell) set_serving_cell(*best);
    const CellId serving = *state_.serving_cell;
    const double rss = sc.rss(serving, state_.clock);
    emit(RadioMeasPayload{serving, rss});
    if (!options_.network_reselection) return;

    const SibConfig sib = sc.sib_at(serving, state_.clock);
    const CarrierNetwork& home = sc.network(net);
    CellMeasurement me{serving, net, home.plmn, rss, sib.reselection_priority, sib.reselection_threshold,
                       sib.barred, sc.cell_available(serving, state_.clock)};
    std::vector<CellMeasurement> candidates;
    for (const auto& other : sc.networks) {
        if (other.network_id == net || other.plmn != home.plmn) continue;
        for (const auto& c : other.cells) {
            const SibConfig s = sc.sib_at(c, state_.clock);
            candidates.push_back({c, other.network_id, other.plmn, sc.rss(c, state_.clock), s.reselection_priority,
                                  s.reselection_threshold, s.barred, sc.cell_available(c, state_.clock)});
        }
    }
    const HandoffDecision d = network_reselection(me, candidates);
    if (!d.move) return;
    SwitchPlan plan;
    plan.kind = SwitchKind::kIntraRat;
    plan.targets = {{d.network, d.cell}};
    begin_switch(plan);
}

// ---------------------------------------------------------------------------
// Paging and traffic

bool Engine::awake_for_paging() const {
    if (!state_.serving_cell || off_since_) return false;
    return active_flows_ > 0 || in_on_duration(scenario_->cell(*state_.serving_cell).sib, state_.clock);
}

void Engine::start_flow(std::size_t idx) {
    const Flow& f = scenario_->workload[idx];
    ++active_flows_;
    if (f.direction == Direction::kUplink) ++active_uplinks_;
    schedule(state_.clock + f.duration + scenario_->device.inactivity_tail, sim::FlowEnd{idx});
}

void Engine::handle(const sim::FlowArrival& ev) {
    const Flow& f = scenario_->workload[ev.flow];
    if (f.direction == Direction::kUplink || awake_for_paging())
        start_flow(ev.flow);
    else
        pending_downlink_.push_back(ev.flow);
    refresh_mode();
}

void Engine::handle(const sim::FlowEnd& ev) {
    --active_flows_;
    if (scenario_->workload[ev.flow].direction == Direction::kUplink) --active_uplinks_;
    refresh_mode();
}

void Engine::handle(const sim::PagingOccasion& ev) {
    if (ev.reg_gen != reg_gen_ || !state_.serving_cell) return;
    const SibConfig& sib = scenario_->cell(*state_.serving_cell).sib;
    if (options_.paging && state_.clock + sib.paging_cycle < horizon_)
        schedule(state_.clock + sib.paging_cycle, sim::PagingOccasion{reg_gen_});
    if (off_since_) return;  // tuned away: the occasion is missed
    const bool pending = !pending_downlink_.empty();
    for (std::size_t idx : pending_downlink_) start_flow(idx);
    pending_downlink_.clear();
    refresh_mode();
    emit(PagingPayload{*state_.serving_cell, pending});
}

// ---------------------------------------------------------------------------
// Scanning

std::uint64_t Engine::begin_scan(const std::vector<CellSlots>& plan, ScanListener listener) {
    cancel_scan();
    ++scan_gen_;
    scan_listener_ = std::move(listener);
    scan_cells_left_ = 0;
    for (const auto& cs : plan) {
        if (cs.slots.empty()) continue;
        ++scan_cells_left_;
        for (std::size_t i = 0; i < cs.slots.size(); ++i) {
            schedule(cs.slots[i].start, sim::ScanSlotStart{scan_gen_, cs.cell});
            schedule(cs.slots[i].end, sim::ScanSlotEnd{scan_gen_, cs.cell, i + 1 == cs.slots.size()});
        }
    }
    scan_active_ = scan_cells_left_ > 0;
    return scan_gen_;
}

void Engine::cancel_scan() {
    if (off_since_) {
        if (state_.clock > *off_since_) off_frequency_.push_back({*off_since_, state_.clock});
        off_since_.reset();
    }
    if (scan_active_) ++scan_gen_;
    scan_active_ = false;
    scan_listener_ = nullptr;
    refresh_mode();
}

void Engine::handle(const sim::ScanSlotStart& ev) {
    if (ev.scan_gen != scan_gen_ || !scan_active_) return;
    off_since_ = state_.clock;
    refresh_mode();
}

void Engine::handle(const sim::ScanSlotEnd& ev) {
    if (ev.scan_gen != scan_gen_ || !scan_active_) return;
    if (off_since_ && state_.clock > *off_since_) off_frequency_.push_back({*off_since_, state_.clock});
    off_since_.reset();
    refresh_mode();
    if (!ev.completes) return;

    const Scenario& sc = *scenario_;
    ScanEntry entry;
    entry.cell_id = ev.cell;
    entry.completed_at = state_.clock;
    entry.sib = sc.sib_at(ev.cell, state_.clock);
    const double rss = sc.rss(ev.cell, state_.clock);
    if (sc.cell_available(ev.cell, state_.clock)) {
        entry.rss = rss;
        const Cell& cell = sc.cell(ev.cell);
        emit(RadioMeasPayload{ev.cell, rss});
        emit(Sib1Payload{ev.cell, sc.network(cell.network).plmn, entry.sib->barred});
        emit(SibReselPayload{ev.cell, entry.sib->reselection_priority, entry.sib->reselection_threshold});
    }
    if (--scan_cells_left_ == 0) scan_active_ = false;
    // The listener may cancel the scan (and with it, itself); keep it alive.
    ScanListener listener = scan_listener_;
    if (!scan_active_) scan_listener_ = nullptr;
    if (listener) listener(*this, entry);
}

void Engine::handle(const sim::Callback& ev) {
    if (ev.fn) ev.fn(*this);
}

// ---------------------------------------------------------------------------
// Outputs

DeviceTimeline Engine::timeline() const {
    DeviceTimeline tl;
    tl.serving = spans_;
    if (open_span_) tl.serving.push_back(*open_span_);
    tl.off_frequency = off_frequency_;
    if (off_since_ && state_.clock > *off_since_) tl.off_frequency.push_back({*off_since_, state_.clock});
    tl.horizon = horizon_;
    tl.inactivity_tail = scenario_->device.inactivity_tail;
    return tl;
}

std::vector<DeliveryRecord> Engine::deliveries() const { return deliver_traffic(scenario_->workload, timeline()); }

double Engine::unregistered_time() const {
    double registered = 0.0;
    for (const auto& s : timeline().serving) {
        const double a = std::max(0.0, s.span.start);
        const double b = std::min(horizon_, s.span.end);
        if (b > a) registered += b - a;
    }
    return horizon_ - registered;
}

}  // namespace mca
