#include "mca/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mca/core/error.hpp"

namespace mca {

std::string_view to_string(Rat rat) { return rat == Rat::k4G ? "4G" : "3G"; }

std::string_view to_string(Direction dir) { return dir == Direction::kUplink ? "UPLINK" : "DOWNLINK"; }

std::string_view to_string(Metric metric) { return metric == Metric::kLatency ? "latency" : "throughput"; }

std::string_view to_string(TrafficClass tc) {
    switch (tc) {
        case TrafficClass::kConversational: return "Conversational";
        case TrafficClass::kStreaming: return "Streaming";
        case TrafficClass::kInteractive: return "Interactive";
        case TrafficClass::kBackground: return "Background";
    }
    return "Background";
}

std::optional<Rat> parse_rat(std::string_view s) {
    if (s == "4G" || s == "RAT_4G") return Rat::k4G;
    if (s == "3G" || s == "RAT_3G") return Rat::k3G;
    return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view s) {
    if (s == "UPLINK") return Direction::kUplink;
    if (s == "DOWNLINK") return Direction::kDownlink;
    return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view s) {
    if (s == "latency") return Metric::kLatency;
    if (s == "throughput") return Metric::kThroughput;
    return std::nullopt;
}

std::optional<TrafficClass> parse_traffic_class(std::string_view s) {
    for (auto tc : {TrafficClass::kConversational, TrafficClass::kStreaming, TrafficClass::kInteractive,
                    TrafficClass::kBackground}) {
        if (to_string(tc) == s) return tc;
    }
    return std::nullopt;
}

double Curve::at(double rss) const {
    if (points.empty()) return 0.0;
    if (rss <= points.front().first) return points.front().second;
    if (rss >= points.back().first) return points.back().second;
    auto hi = std::upper_bound(points.begin(), points.end(), rss,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double frac = (rss - lo->first) / (hi->first - lo->first);
    return lo->second + frac * (hi->second - lo->second);
}

double PerformanceModel::evaluate(const NetworkId& net, Metric metric, double rss) const {
    auto it = networks.find(net);
    if (it == networks.end()) throw Error(Errc::UnknownNetwork, "no performance model for " + net);
    auto curve = it->second.find(metric);
    if (curve == it->second.end())
        throw Error(Errc::InvalidValue, "no " + std::string(to_string(metric)) + " curve for " + net);
    return curve->second.at(rss);
}

double PerformanceModel::outage_value(Metric metric) const {
    auto it = outage.find(metric);
    if (it != outage.end()) return it->second;
    return metric == Metric::kLatency ? 1000.0 : 0.0;
}

double rss_at(const RadioTrace& trace, const CellId& cell, double t) {
    auto it = trace.cells.find(cell);
    if (it == trace.cells.end() || it->second.empty()) throw Error(Errc::UnknownCell, cell);
    const auto& pts = it->second;
    if (t <= pts.front().time) return pts.front().rss;
    if (t >= pts.back().time) return pts.back().rss;
    auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                               [](double v, const TracePoint& p) { return v < p.time; });
    auto lo = hi - 1;
    if (lo->time == t) return lo->rss;
    const double frac = (t - lo->time) / (hi->time - lo->time);
    return lo->rss + frac * (hi->rss - lo->rss);
}

bool Scenario::operator==(const Scenario& o) const {
    return name == o.name && seed == o.seed && horizon == o.horizon && service_floor == o.service_floor &&
           platform_overhead == o.platform_overhead &&
           attach_failure_probability == o.attach_failure_probability && networks == o.networks &&
           cells == o.cells && trace == o.trace && workload == o.workload && performance == o.performance &&
           plmn_priority_list == o.plmn_priority_list && device == o.device && history == o.history &&
           billing == o.billing && requirements == o.requirements;
}

void Scenario::reindex() {
    cell_index_.clear();
    network_index_.clear();
    for (std::size_t i = 0; i < cells.size(); ++i) cell_index_.emplace(cells[i].cell_id, i);
    for (std::size_t i = 0; i < networks.size(); ++i) network_index_.emplace(networks[i].network_id, i);
}

const Cell& Scenario::cell(const CellId& id) const {
    auto it = cell_index_.find(id);
    if (it == cell_index_.end()) {
        // Unindexed scenarios (mid-construction) fall back to a linear search.
        for (const auto& c : cells)
            if (c.cell_id == id) return c;
        throw Error(Errc::UnknownCell, id);
    }
    return cells[it->second];
}

const CarrierNetwork& Scenario::network(const NetworkId& id) const {
    auto it = network_index_.find(id);
    if (it == network_index_.end()) {
        for (const auto& n : networks)
            if (n.network_id == id) return n;
        throw Error(Errc::UnknownNetwork, id);
    }
    return networks[it->second];
}

bool Scenario::has_cell(const CellId& id) const {
    if (cell_index_.count(id)) return true;
    return std::any_of(cells.begin(), cells.end(), [&](const Cell& c) { return c.cell_id == id; });
}

bool Scenario::has_network(const NetworkId& id) const {
    if (network_index_.count(id)) return true;
    return std::any_of(networks.begin(), networks.end(),
                       [&](const CarrierNetwork& n) { return n.network_id == id; });
}

double Scenario::end_time() const {
    if (horizon) return *horizon;
    double end = 0.0;
    for (const auto& [id, pts] : trace.cells)
        if (!pts.empty()) end = std::max(end, pts.back().time);
    return end;
}

double Scenario::rss(const CellId& c, double t) const { return rss_at(trace, c, t); }

bool Scenario::cell_available(const CellId& c, double t) const { return rss(c, t) >= service_floor; }

SibConfig Scenario::sib_at(const CellId& c, double t) const {
    const Cell& info = cell(c);
    SibConfig sib = info.sib;
    for (const auto& w : info.barred_windows)
        if (w.contains(t)) sib.barred = true;
    return sib;
}

std::optional<double> Scenario::network_rss(const NetworkId& net, double t) const {
    std::optional<double> best;
    for (const auto& c : network(net).cells) {
        const double v = rss(c, t);
        if (v >= service_floor && (!best || v > *best)) best = v;
    }
    return best;
}

std::optional<CellId> Scenario::best_cell(const NetworkId& net, double t) const {
    std::optional<CellId> best;
    double best_rss = -std::numeric_limits<double>::infinity();
    for (const auto& c : network(net).cells) {
        const double v = rss(c, t);
        if (v < service_floor) continue;
        if (!best || v > best_rss || (v == best_rss && c < *best)) {
            best = c;
            best_rss = v;
        }
    }
    return best;
}

std::vector<CellId> Scenario::cells_in_band_order(const NetworkId& net) const {
    std::vector<CellId> out = network(net).cells;
    std::sort(out.begin(), out.end(), [&](const CellId& a, const CellId& b) {
        const auto& ca = cell(a);
        const auto& cb = cell(b);
        if (ca.band != cb.band) return ca.band < cb.band;
        return a < b;
    });
    return out;
}

std::optional<double> NetworkScan::best_rss() const {
    std::optional<double> best;
    for (const auto& e : cells)
        if (e.rss && (!best || *e.rss > *best)) best = e.rss;
    return best;
}

const ScanEntry* NetworkScan::best_entry() const {
    const ScanEntry* best = nullptr;
    for (const auto& e : cells) {
        if (!e.rss) continue;
        if (!best || *e.rss > *best->rss || (*e.rss == *best->rss && e.cell_id < best->cell_id)) best = &e;
    }
    return best;
}

const NetworkScan* ScanResult::find(const NetworkId& id) const {
    for (const auto& n : networks)
        if (n.network_id == id) return &n;
    return nullptr;
}

}  // namespace mca
