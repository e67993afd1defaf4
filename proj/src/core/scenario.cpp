#include "mca/core/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mca {

namespace {

void issue(std::vector<ValidationIssue>& out, Errc code, const std::string& entity, const std::string& msg) {
    out.push_back({code, entity, msg});
}

bool curve_ok(const Curve& c) {
    if (c.points.empty()) return false;
    for (std::size_t i = 1; i < c.points.size(); ++i)
        if (!(c.points[i].first > c.points[i - 1].first)) return false;
    return std::all_of(c.points.begin(), c.points.end(),
                       [](const auto& p) { return std::isfinite(p.first) && std::isfinite(p.second); });
}

}  // namespace

ValidationResult validate_scenario(Scenario raw) {
    std::vector<ValidationIssue> issues;

    std::set<std::string> network_ids;
    for (const auto& n : raw.networks) {
        if (!network_ids.insert(n.network_id).second)
            issue(issues, Errc::DuplicateId, n.network_id, "network id used more than once");
    }
    std::set<std::string> cell_ids;
    for (const auto& c : raw.cells) {
        if (!cell_ids.insert(c.cell_id).second)
            issue(issues, Errc::DuplicateId, c.cell_id, "cell id used more than once");
    }

    std::map<CellId, NetworkId> owner;
    for (const auto& n : raw.networks) {
        if (n.cells.empty()) issue(issues, Errc::EmptyNetwork, n.network_id, "network has no cells");
        if (n.plmn.empty()) issue(issues, Errc::InvalidValue, n.network_id, "empty plmn");
        for (const auto& c : n.cells) {
            if (!cell_ids.count(c)) {
                issue(issues, Errc::DanglingReference, n.network_id, "lists unknown cell " + c);
                continue;
            }
            auto [it, fresh] = owner.emplace(c, n.network_id);
            if (!fresh)
                issue(issues, Errc::DanglingReference, c,
                      "cell listed by both " + it->second + " and " + n.network_id);
        }
    }

    for (const auto& c : raw.cells) {
        if (!network_ids.count(c.network)) {
            issue(issues, Errc::DanglingReference, c.cell_id, "references unknown network " + c.network);
        } else {
            auto it = owner.find(c.cell_id);
            if (it == owner.end() || it->second != c.network)
                issue(issues, Errc::DanglingReference, c.cell_id,
                      "network " + c.network + " does not list this cell");
        }
        if (!(c.scan_time > 0.0)) issue(issues, Errc::InvalidValue, c.cell_id, "scan_time must be > 0");
        if (!(c.attach_time >= 0.0)) issue(issues, Errc::InvalidValue, c.cell_id, "attach_time must be >= 0");
        if (!(c.sib.paging_cycle > 0.0))
            issue(issues, Errc::InvalidValue, c.cell_id, "paging_cycle must be > 0");
        if (!(c.sib.on_duration > 0.0 && c.sib.on_duration < c.sib.paging_cycle))
            issue(issues, Errc::InvalidValue, c.cell_id, "on_duration must lie in (0, paging_cycle)");
        for (const auto& w : c.barred_windows)
            if (!(w.end > w.start)) issue(issues, Errc::InvalidValue, c.cell_id, "empty barred window");

        auto tr = raw.trace.cells.find(c.cell_id);
        if (tr == raw.trace.cells.end() || tr->second.empty())
            issue(issues, Errc::MissingTrace, c.cell_id, "cell has no trace breakpoints");
    }

    for (const auto& [cell, pts] : raw.trace.cells) {
        if (!cell_ids.count(cell)) issue(issues, Errc::DanglingReference, cell, "trace for unknown cell");
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (!(pts[i].time > pts[i - 1].time)) {
                std::ostringstream msg;
                msg << "breakpoint time " << pts[i].time << " does not follow " << pts[i - 1].time;
                issue(issues, Errc::NonMonotoneTrace, cell, msg.str());
                break;
            }
        }
        for (const auto& p : pts)
            if (!std::isfinite(p.time) || !std::isfinite(p.rss)) {
                issue(issues, Errc::InvalidValue, cell, "non-finite breakpoint");
                break;
            }
    }

    for (std::size_t i = 0; i < raw.workload.size(); ++i) {
        const auto& f = raw.workload[i];
        const std::string id = "flow[" + std::to_string(i) + "]";
        if (!(f.arrival_time >= 0.0)) issue(issues, Errc::InvalidValue, id, "arrival_time must be >= 0");
        if (!(f.duration > 0.0)) issue(issues, Errc::InvalidValue, id, "duration must be > 0");
    }

    for (const auto& [net, curves] : raw.performance.networks) {
        if (!network_ids.count(net))
            issue(issues, Errc::DanglingReference, net, "performance model for unknown network");
        for (const auto& [metric, curve] : curves)
            if (!curve_ok(curve))
                issue(issues, Errc::InvalidValue, net,
                      std::string(to_string(metric)) + " curve must be non-empty with increasing rss");
    }
    for (const auto& n : raw.networks) {
        auto it = raw.performance.networks.find(n.network_id);
        for (auto m : {Metric::kLatency, Metric::kThroughput}) {
            if (it == raw.performance.networks.end() || !it->second.count(m))
                issue(issues, Errc::InvalidValue, n.network_id,
                      "missing " + std::string(to_string(m)) + " performance curve");
        }
    }

    if (raw.device.initial_registration && !network_ids.count(*raw.device.initial_registration))
        issue(issues, Errc::DanglingReference, *raw.device.initial_registration,
              "initial registration references unknown network");
    if (!(raw.device.inactivity_tail >= 0.0))
        issue(issues, Errc::InvalidValue, "device", "inactivity_tail must be >= 0");

    std::set<std::string> prio;
    for (const auto& p : raw.plmn_priority_list) {
        if (!network_ids.count(p)) issue(issues, Errc::DanglingReference, p, "priority list names unknown network");
        if (!prio.insert(p).second) issue(issues, Errc::DuplicateId, p, "network repeated in priority list");
    }
    for (const auto& n : raw.networks)
        if (!prio.count(n.network_id))
            issue(issues, Errc::InvalidValue, n.network_id, "network missing from plmn_priority_list");

    for (std::size_t i = 0; i < raw.history.size(); ++i) {
        const auto& h = raw.history[i];
        const std::string id = "history[" + std::to_string(i) + "]";
        if (!network_ids.count(h.network))
            issue(issues, Errc::DanglingReference, id, "unknown network " + h.network);
        else if (!h.cell.empty() && (!owner.count(h.cell) || owner.at(h.cell) != h.network))
            issue(issues, Errc::DanglingReference, id, "cell " + h.cell + " is not in " + h.network);
    }

    std::set<std::string> plmns;
    for (const auto& n : raw.networks) plmns.insert(n.plmn);
    for (const auto& [carrier, plan] : raw.billing) {
        if (!plmns.count(carrier)) issue(issues, Errc::DanglingReference, carrier, "billing plan for unknown plmn");
        double prev = 0.0;
        for (const auto& t : plan.tiers) {
            if (!(t.up_to > prev) || !(t.price >= 0.0)) {
                issue(issues, Errc::InvalidValue, carrier, "billing tiers must have increasing volumes");
                break;
            }
            prev = t.up_to;
        }
        if (plan.tiers.empty()) issue(issues, Errc::InvalidValue, carrier, "billing plan without tiers");
    }

    if (raw.horizon && !(*raw.horizon > 0.0)) issue(issues, Errc::InvalidValue, "horizon", "must be > 0");
    if (!(raw.platform_overhead >= 0.0))
        issue(issues, Errc::InvalidValue, "platform_overhead", "must be >= 0");
    if (!(raw.attach_failure_probability >= 0.0 && raw.attach_failure_probability <= 1.0))
        issue(issues, Errc::InvalidValue, "attach_failure_probability", "must lie in [0, 1]");
    if (!raw.requirements.needs_voice && !raw.requirements.needs_data)
        issue(issues, Errc::InvalidValue, "requirements", "at least one of voice/data must be required");

    ValidationResult result;
    result.issues = std::move(issues);
    if (result.issues.empty()) {
        raw.reindex();
        result.scenario = std::move(raw);
    }
    return result;
}

std::optional<double> first_unavailable_time(const Scenario& sc, const NetworkId& net, double t0, double t1) {
    if (t1 < t0) return std::nullopt;
    const auto& cells = sc.network(net).cells;
    std::vector<double> cuts{t0, t1};
    for (const auto& c : cells) {
        auto it = sc.trace.cells.find(c);
        if (it == sc.trace.cells.end()) continue;
        for (const auto& p : it->second)
            if (p.time > t0 && p.time < t1) cuts.push_back(p.time);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double floor = sc.service_floor;
    if (cuts.size() == 1) {
        const bool all_below = std::all_of(cells.begin(), cells.end(),
                                           [&](const CellId& c) { return sc.rss(c, t0) < floor; });
        return all_below ? std::optional<double>(t0) : std::nullopt;
    }

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        // Every cell is linear on [a, b]; intersect the sets {t : rss < floor}.
        double lo = a, hi = b;
        bool lo_closed = true, hi_closed = true;
        bool empty = false;
        for (const auto& c : cells) {
            const double fa = sc.rss(c, a);
            const double fb = sc.rss(c, b);
            double s_lo, s_hi;
            bool s_lo_closed, s_hi_closed;
            if (fa < floor && fb < floor) {
                s_lo = a; s_hi = b; s_lo_closed = s_hi_closed = true;
            } else if (fa < floor) {
                s_lo = a; s_lo_closed = true;
                s_hi = a + (floor - fa) / (fb - fa) * (b - a); s_hi_closed = false;
            } else if (fb < floor) {
                s_lo = a + (fa - floor) / (fa - fb) * (b - a); s_lo_closed = false;
                s_hi = b; s_hi_closed = true;
            } else {
                empty = true;
                break;
            }
            if (s_lo > lo || (s_lo == lo && !s_lo_closed)) { lo = s_lo; lo_closed = s_lo_closed; }
            if (s_hi < hi || (s_hi == hi && !s_hi_closed)) { hi = s_hi; hi_closed = s_hi_closed; }
        }
        if (empty) continue;
        if (lo < hi || (lo == hi && lo_closed && hi_closed)) return lo;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(Errc::ParseError, msg); }

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    return it->get<T>();
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) parse_fail(where + ": missing field '" + key + "'");
    return *it;
}

Curve parse_curve(const json& j) {
    Curve c;
    for (const auto& p : j) c.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return c;
}

ordered_json curve_json(const Curve& c) {
    ordered_json arr = ordered_json::array();
    for (const auto& [x, y] : c.points) arr.push_back({x, y});
    return arr;
}

QosConfig parse_qos(const json& j) {
    QosConfig q;
    if (j.contains("traffic_class")) {
        auto tc = parse_traffic_class(j["traffic_class"].get<std::string>());
        if (!tc) parse_fail("unknown traffic_class " + j["traffic_class"].dump());
        q.traffic_class = *tc;
    }
    q.delay_class = get_or(j, "delay_class", q.delay_class);
    q.max_dl_rate = get_or(j, "max_dl_rate", q.max_dl_rate);
    q.max_ul_rate = get_or(j, "max_ul_rate", q.max_ul_rate);
    q.dl_gbr = get_or(j, "dl_gbr", q.dl_gbr);
    q.ul_gbr = get_or(j, "ul_gbr", q.ul_gbr);
    return q;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    try {
        if (!doc.is_object()) parse_fail("scenario document must be an object");
        Scenario sc;
        sc.name = get_or<std::string>(doc, "name", "");
        sc.seed = get_or<std::uint64_t>(doc, "seed", 1);
        if (doc.contains("horizon") && !doc["horizon"].is_null()) sc.horizon = doc["horizon"].get<double>();
        sc.service_floor = get_or(doc, "service_floor", kDefaultServiceFloor);
        sc.platform_overhead = get_or(doc, "platform_overhead", 0.0);
        sc.attach_failure_probability = get_or(doc, "attach_failure_probability", 0.0);

        for (const auto& n : require(doc, "networks", "scenario")) {
            CarrierNetwork net;
            net.network_id = require(n, "network_id", "network").get<std::string>();
            net.plmn = require(n, "plmn", net.network_id).get<std::string>();
            auto rat = parse_rat(require(n, "rat", net.network_id).get<std::string>());
            if (!rat) parse_fail(net.network_id + ": rat must be 4G or 3G");
            net.rat = *rat;
            net.cells = get_or<std::vector<std::string>>(n, "cells", {});
            sc.networks.push_back(std::move(net));
        }

        for (const auto& c : require(doc, "cells", "scenario")) {
            Cell cell;
            cell.cell_id = require(c, "cell_id", "cell").get<std::string>();
            cell.network = require(c, "network", cell.cell_id).get<std::string>();
            cell.band = get_or<std::string>(c, "band", "");
            cell.scan_time = require(c, "scan_time", cell.cell_id).get<double>();
            cell.attach_time = get_or(c, "attach_time", 0.0);
            if (c.contains("sib")) {
                const auto& s = c["sib"];
                cell.sib.barred = get_or(s, "barred", false);
                cell.sib.paging_cycle = get_or(s, "paging_cycle", 1.0);
                cell.sib.on_duration = get_or(s, "on_duration", 0.1 * cell.sib.paging_cycle);
                cell.sib.reselection_priority = get_or(s, "reselection_priority", 0);
                cell.sib.reselection_threshold = get_or(s, "reselection_threshold", -120.0);
                cell.sib.voice_over_ps = get_or(s, "voice_over_ps", true);
            }
            if (c.contains("qos")) cell.qos = parse_qos(c["qos"]);
            cell.tdd_config = get_or(c, "tdd_config", 0);
            if (c.contains("barred_windows"))
                for (const auto& w : c["barred_windows"])
                    cell.barred_windows.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
            sc.cells.push_back(std::move(cell));
        }

        for (const auto& [cell, pts] : require(doc, "trace", "scenario").items()) {
            auto& out = sc.trace.cells[cell];
            for (const auto& p : pts) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }

        if (doc.contains("workload")) {
            for (const auto& f : doc["workload"]) {
                Flow flow;
                flow.arrival_time = require(f, "arrival_time", "flow").get<double>();
                auto dir = parse_direction(require(f, "direction", "flow").get<std::string>());
                if (!dir) parse_fail("flow direction must be UPLINK or DOWNLINK");
                flow.direction = *dir;
                flow.duration = require(f, "duration", "flow").get<double>();
                sc.workload.push_back(flow);
            }
        }

        const auto& perf = require(doc, "performance", "scenario");
        if (perf.contains("outage")) {
            for (const auto& [k, v] : perf["outage"].items()) {
                auto m = parse_metric(k);
                if (!m) parse_fail("unknown outage metric " + k);
                sc.performance.outage[*m] = v.get<double>();
            }
        }
        for (const auto& [net, curves] : require(perf, "networks", "performance").items()) {
            for (const auto& [k, v] : curves.items()) {
                auto m = parse_metric(k);
                if (!m) parse_fail("unknown metric " + k + " for " + net);
                sc.performance.networks[net][*m] = parse_curve(v);
            }
        }

        if (doc.contains("baseline"))
            sc.plmn_priority_list = get_or<std::vector<std::string>>(doc["baseline"], "plmn_priority_list", {});

        if (doc.contains("device")) {
            const auto& d = doc["device"];
            if (d.contains("initial_registration") && !d["initial_registration"].is_null())
                sc.device.initial_registration = d["initial_registration"].get<std::string>();
            sc.device.inactivity_tail = get_or(d, "inactivity_tail", 0.0);
        }

        if (doc.contains("history")) {
            for (const auto& h : doc["history"]) {
                HistoryRecord r;
                r.network = require(h, "network", "history").get<std::string>();
                r.cell = get_or<std::string>(h, "cell", "");
                r.rss = require(h, "rss", "history").get<double>();
                r.latency = require(h, "latency", "history").get<double>();
                r.throughput = require(h, "throughput", "history").get<double>();
                sc.history.push_back(std::move(r));
            }
        }

        if (doc.contains("billing")) {
            for (const auto& [carrier, p] : doc["billing"].items()) {
                BillingPlan plan;
                plan.usage = get_or(p, "usage", 0.0);
                for (const auto& t : require(p, "tiers", carrier)) {
                    BillingTier tier;
                    tier.up_to = t.contains("up_to") && !t["up_to"].is_null()
                                     ? t["up_to"].get<double>()
                                     : std::numeric_limits<double>::infinity();
                    tier.price = require(t, "price", carrier).get<double>();
                    plan.tiers.push_back(tier);
                }
                sc.billing[carrier] = std::move(plan);
            }
        }

        if (doc.contains("requirements")) {
            sc.requirements.needs_voice = get_or(doc["requirements"], "needs_voice", false);
            sc.requirements.needs_data = get_or(doc["requirements"], "needs_data", true);
        }
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

ordered_json scenario_to_json(const Scenario& sc) {
    ordered_json doc;
    doc["name"] = sc.name;
    doc["seed"] = sc.seed;
    doc["horizon"] = sc.horizon ? ordered_json(*sc.horizon) : ordered_json(nullptr);
    doc["service_floor"] = sc.service_floor;
    doc["platform_overhead"] = sc.platform_overhead;
    doc["attach_failure_probability"] = sc.attach_failure_probability;

    doc["networks"] = ordered_json::array();
    for (const auto& n : sc.networks)
        doc["networks"].push_back(
            {{"network_id", n.network_id}, {"plmn", n.plmn}, {"rat", to_string(n.rat)}, {"cells", n.cells}});

    doc["cells"] = ordered_json::array();
    for (const auto& c : sc.cells) {
        ordered_json cj;
        cj["cell_id"] = c.cell_id;
        cj["network"] = c.network;
        cj["band"] = c.band;
        cj["scan_time"] = c.scan_time;
        cj["attach_time"] = c.attach_time;
        cj["sib"] = {{"barred", c.sib.barred},
                     {"paging_cycle", c.sib.paging_cycle},
                     {"on_duration", c.sib.on_duration},
                     {"reselection_priority", c.sib.reselection_priority},
                     {"reselection_threshold", c.sib.reselection_threshold},
                     {"voice_over_ps", c.sib.voice_over_ps}};
        cj["qos"] = {{"traffic_class", to_string(c.qos.traffic_class)},
                     {"delay_class", c.qos.delay_class},
                     {"max_dl_rate", c.qos.max_dl_rate},
                     {"max_ul_rate", c.qos.max_ul_rate},
                     {"dl_gbr", c.qos.dl_gbr},
                     {"ul_gbr", c.qos.ul_gbr}};
        cj["tdd_config"] = c.tdd_config;
        cj["barred_windows"] = ordered_json::array();
        for (const auto& w : c.barred_windows) cj["barred_windows"].push_back({w.start, w.end});
        doc["cells"].push_back(std::move(cj));
    }

    doc["trace"] = ordered_json::object();
    for (const auto& [cell, pts] : sc.trace.cells) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : pts) arr.push_back({p.time, p.rss});
        doc["trace"][cell] = std::move(arr);
    }

    doc["workload"] = ordered_json::array();
    for (const auto& f : sc.workload)
        doc["workload"].push_back(
            {{"arrival_time", f.arrival_time}, {"direction", to_string(f.direction)}, {"duration", f.duration}});

    ordered_json perf;
    for (const auto& [m, v] : sc.performance.outage) perf["outage"][std::string(to_string(m))] = v;
    perf["networks"] = ordered_json::object();
    for (const auto& [net, curves] : sc.performance.networks)
        for (const auto& [m, c] : curves) perf["networks"][net][std::string(to_string(m))] = curve_json(c);
    doc["performance"] = std::move(perf);

    doc["baseline"] = {{"plmn_priority_list", sc.plmn_priority_list}};
    doc["device"] = {{"initial_registration", sc.device.initial_registration
                                                  ? ordered_json(*sc.device.initial_registration)
                                                  : ordered_json(nullptr)},
                     {"inactivity_tail", sc.device.inactivity_tail}};

    doc["history"] = ordered_json::array();
    for (const auto& h : sc.history)
        doc["history"].push_back({{"network", h.network},
                                  {"cell", h.cell},
                                  {"rss", h.rss},
                                  {"latency", h.latency},
                                  {"throughput", h.throughput}});

    doc["billing"] = ordered_json::object();
    for (const auto& [carrier, plan] : sc.billing) {
        ordered_json tiers = ordered_json::array();
        for (const auto& t : plan.tiers)
            tiers.push_back({{"up_to", std::isinf(t.up_to) ? ordered_json(nullptr) : ordered_json(t.up_to)},
                             {"price", t.price}});
        doc["billing"][carrier] = {{"usage", plan.usage}, {"tiers", std::move(tiers)}};
    }
    doc["requirements"] = {{"needs_voice", sc.requirements.needs_voice},
                           {"needs_data", sc.requirements.needs_data}};
    return doc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

Scenario load_valid_scenario(const std::filesystem::path& path) {
    auto result = validate_scenario(load_scenario_file(path));
    if (!result.ok()) throw Error(Errc::InvalidScenario, format_issues(result.issues));
    return std::move(*result.scenario);
}

std::string format_issues(const std::vector<ValidationIssue>& issues) {
    std::ostringstream out;
    for (const auto& i : issues) out << to_string(i.code) << " [" << i.entity << "] " << i.message << "\n";
    return out.str();
}

}  // namespace mca
