#include "mca/plmn/switching.hpp"

#include <algorithm>

#include "mca/core/error.hpp"

namespace mca {

bool baseline_trigger(const DeviceState&, const CellularEvent& event) {
    return event.kind() == EventKind::kOutOfService;
}

namespace {

std::vector<NetworkId> scan_order(const Scenario& sc) {
    std::vector<NetworkId> order = sc.plmn_priority_list;
    for (const auto& n : sc.networks)
        if (std::find(order.begin(), order.end(), n.network_id) == order.end()) order.push_back(n.network_id);
    return order;
}

ScanEntry measure(const Scenario& sc, const CellId& cell, double t) {
    ScanEntry e;
    e.cell_id = cell;
    e.completed_at = t;
    e.sib = sc.sib_at(cell, t);
    if (sc.cell_available(cell, t)) e.rss = sc.rss(cell, t);
    return e;
}

}  // namespace

ScanResult exhaustive_scan(const Scenario& sc, double t0) {
    ScanResult out;
    double t = t0;
    for (const auto& net : scan_order(sc)) {
        NetworkScan ns{net, {}};
        for (const auto& cell : sc.cells_in_band_order(net)) {
            t += sc.cell(cell).scan_time;
            out.elapsed += sc.cell(cell).scan_time;
            ++out.cells_scanned;
            ns.cells.push_back(measure(sc, cell, t));
        }
        out.networks.push_back(std::move(ns));
    }
    return out;
}

std::optional<CellId> attach_cell(const NetworkScan& net) {
    const ScanEntry* best = nullptr;
    for (const auto& e : net.cells) {
        if (!e.available() || !e.sib || e.sib->barred) continue;
        if (!best || *e.rss > *best->rss || (*e.rss == *best->rss && e.cell_id < best->cell_id)) best = &e;
    }
    if (!best) return std::nullopt;
    return best->cell_id;
}

std::optional<NetworkId> preference_select(const ScanResult& scan, const std::vector<NetworkId>& priority) {
    for (const auto& net : priority)
        if (const auto* ns = scan.find(net); ns && attach_cell(*ns)) return net;
    return std::nullopt;
}

SwitchTiming direct_switch_timing(const Scenario& sc, const NetworkId& target, const CellId& cell) {
    SwitchTiming t;
    for (const auto& c : sc.network(target).cells) {
        t.per_cell_scan.push_back(sc.cell(c).scan_time);
        t.scan_cost += sc.cell(c).scan_time;
    }
    t.n_t = static_cast<int>(t.per_cell_scan.size());
    t.attach = sc.cell(cell).attach_time;
    t.overhead = sc.platform_overhead;
    t.target = AttachTarget{target, cell};
    return t;
}

SwitchTiming hard_switch(Engine& engine, const ScanResult& scan, const std::vector<NetworkId>& priority) {
    const Scenario& sc = engine.scenario();
    SwitchPlan plan;
    plan.kind = SwitchKind::kBaseline;
    plan.scan_cost = scan.elapsed;
    plan.n_t = scan.cells_scanned;
    plan.overhead = sc.platform_overhead;
    for (const auto& net : priority)
        if (const auto* ns = scan.find(net))
            if (auto cell = attach_cell(*ns)) plan.targets.push_back({net, *cell});
    if (plan.targets.empty()) plan.overhead = 0.0;  // nothing to attach to, no SIM change

    const ScheduledSwitch s = engine.begin_switch(plan);
    SwitchTiming t;
    t.n_t = plan.n_t;
    for (const auto& ns : scan.networks)
        for (const auto& e : ns.cells) t.per_cell_scan.push_back(sc.cell(e.cell_id).scan_time);
    t.scan_cost = scan.elapsed;
    t.attach = s.attach_cost;
    t.overhead = plan.overhead;
    t.target = s.target;
    return t;
}

SwitchTiming direct_switch(Engine& engine, const ScanResult& scan, const NetworkId& target) {
    const auto* ns = scan.find(target);
    if (!ns) throw Error(Errc::TargetNotScanned, "network " + target + " is not in the latest scan");
    const auto cell = attach_cell(*ns);
    if (!cell) throw Error(Errc::TargetNotScanned, "network " + target + " has no usable cell in the latest scan");

    SwitchTiming t = direct_switch_timing(engine.scenario(), target, *cell);
    SwitchPlan plan;
    plan.kind = SwitchKind::kDirect;
    plan.targets = {*t.target};
    plan.n_t = t.n_t;
    plan.scan_cost = t.scan_cost;
    plan.overhead = t.overhead;
    const ScheduledSwitch s = engine.begin_switch(plan);
    t.attach = s.attach_cost;
    t.target = s.target;
    return t;
}

void LegacySelection::operator()(Engine& engine, const CellularEvent& ev) {
    if (!baseline_trigger(engine.state(), ev) || engine.switch_in_progress() || engine.state().registered) return;
    const Scenario& sc = engine.scenario();
    const double t = engine.now();

    // Same carrier, other RAT: the modem falls back without a band sweep.
    const auto& oos = std::get<OutOfServicePayload>(ev.payload);
    if (oos.network) {
        const std::string& plmn = sc.network(*oos.network).plmn;
        for (const auto& net : sc.plmn_priority_list) {
            if (net == *oos.network || sc.network(net).plmn != plmn) continue;
            NetworkScan ns{net, {}};
            for (const auto& c : sc.network(net).cells) ns.cells.push_back(measure(sc, c, t));
            if (auto cell = attach_cell(ns)) {
                SwitchPlan plan;
                plan.kind = SwitchKind::kIntraRat;
                plan.targets = {{net, *cell}};
                engine.begin_switch(plan);
                return;
            }
        }
    }

    scans_.push_back(exhaustive_scan(sc, t));
    hard_switch(engine, scans_.back(), sc.plmn_priority_list);
}

}  // namespace mca
