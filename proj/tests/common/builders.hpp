#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mca/core/error.hpp"
#include "mca/core/scenario.hpp"
#include "mca/core/types.hpp"

namespace mca::testing {

/// Fluent scenario construction for tests. Networks get default curves and
/// are appended to the priority list in declaration order.
class ScenarioBuilder {
public:
    explicit ScenarioBuilder(std::string name = "test") {
        sc_.name = std::move(name);
        sc_.service_floor = -140.0;
    }

    ScenarioBuilder& horizon(double h) {
        sc_.horizon = h;
        return *this;
    }
    ScenarioBuilder& seed(std::uint64_t s) {
        sc_.seed = s;
        return *this;
    }
    ScenarioBuilder& overhead(double o) {
        sc_.platform_overhead = o;
        return *this;
    }
    ScenarioBuilder& network(const std::string& id, const std::string& plmn, Rat rat = Rat::k4G) {
        sc_.networks.push_back({id, plmn, rat, {}});
        sc_.plmn_priority_list.push_back(id);
        sc_.performance.networks[id][Metric::kThroughput].points = {{-130.0, 1.0}, {-70.0, 30.0}};
        sc_.performance.networks[id][Metric::kLatency].points = {{-130.0, 300.0}, {-70.0, 30.0}};
        return *this;
    }
    /// Adds a cell with a constant RSS.
    ScenarioBuilder& cell(const std::string& id, const std::string& net, double rss, double scan_time = 0.4,
                          double attach_time = 2.6, SibConfig sib = {}) {
        return cell_trace(id, net, {{0.0, rss}, {1000.0, rss}}, scan_time, attach_time, sib);
    }
    ScenarioBuilder& cell_trace(const std::string& id, const std::string& net, std::vector<TracePoint> trace,
                                double scan_time = 0.4, double attach_time = 2.6, SibConfig sib = {}) {
        Cell c;
        c.cell_id = id;
        c.network = net;
        c.band = "B1";
        c.scan_time = scan_time;
        c.attach_time = attach_time;
        c.sib = sib;
        sc_.cells.push_back(c);
        for (auto& n : sc_.networks)
            if (n.network_id == net) n.cells.push_back(id);
        sc_.trace.cells[id] = std::move(trace);
        return *this;
    }
    ScenarioBuilder& initial(const std::string& net) {
        sc_.device.initial_registration = net;
        return *this;
    }
    ScenarioBuilder& flow(double at, Direction dir, double duration) {
        sc_.workload.push_back({at, dir, duration});
        return *this;
    }
    Scenario& raw() { return sc_; }

    Scenario build() const {
        auto res = validate_scenario(sc_);
        if (!res.ok()) throw Error(Errc::InvalidScenario, format_issues(res.issues));
        return *res.scenario;
    }
    std::shared_ptr<const Scenario> shared() const { return std::make_shared<const Scenario>(build()); }

private:
    Scenario sc_;
};

inline ScanEntry entry(const CellId& cell, std::optional<double> rss, SibConfig sib = {}, double t = 0.0) {
    return ScanEntry{cell, rss, sib, t};
}

}  // namespace mca::testing
