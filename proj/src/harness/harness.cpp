#include "mca/harness/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <memory>
#include <sstream>

#include "mca/core/error.hpp"
#include "mca/core/scenario.hpp"
#include "mca/plmn/switching.hpp"
#include "mca/predict/predictor.hpp"

namespace mca {

std::optional<ReportFormat> parse_format(std::string_view s) {
    if (s == "json") return ReportFormat::kJson;
    if (s == "csv") return ReportFormat::kCsv;
    return std::nullopt;
}

std::string_view to_string(ReportFormat f) { return f == ReportFormat::kJson ? "json" : "csv"; }

// ---------------------------------------------------------------------------
// Metrics

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

MetricsCore compute_metrics(const std::vector<std::string>& chosen, const std::vector<std::string>& optimal,
                            const std::vector<double>& x, const std::vector<double>& x_opt) {
    const std::size_t n = chosen.size();
    if (optimal.size() != n || x.size() != n || x_opt.size() != n)
        throw Error(Errc::LengthMismatch, "decision, oracle and value logs differ in length");
    MetricsCore m;
    m.epochs = n;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] == optimal[i]) ++hits;
        if (x_opt[i] == 0.0) {
            ++m.zero_optimum;
            m.gamma.push_back(std::nullopt);
            continue;
        }
        const double g = std::abs(x[i] - x_opt[i]) / x_opt[i];
        m.gamma.push_back(g);
        if (g > 0.0) m.gamma_plus.push_back(g);
    }
    m.hit_ratio = n == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(n);
    m.gamma_plus_median = median_of(m.gamma_plus);
    m.gamma_plus_max = m.gamma_plus.empty() ? 0.0 : *std::max_element(m.gamma_plus.begin(), m.gamma_plus.end());
    if (m.zero_optimum > 0)
        m.warnings.push_back("ZERO_OPTIMUM: " + std::to_string(m.zero_optimum) +
                             " epoch(s) with a zero optimum excluded from gamma");
    return m;
}

double MetricsReport::disruption_total() const {
    double s = 0.0;
    for (const auto& sw : switches) s += sw.disruption();
    return s;
}

double MetricsReport::disruption_mean() const {
    return switches.empty() ? 0.0 : disruption_total() / static_cast<double>(switches.size());
}

// ---------------------------------------------------------------------------
// Running

Scenario apply_overrides(Scenario sc, const RunConfig& config) {
    if (config.seed) sc.seed = *config.seed;
    if (config.platform_overhead) sc.platform_overhead = *config.platform_overhead;
    return sc;
}

void replay_history(const Scenario& sc, ProfileStore& profiles, CarrierPredictor* predictor) {
    for (const auto& rec : sc.history) {
        const CellId cell = rec.cell.empty() ? sc.cells_in_band_order(rec.network).front() : rec.cell;
        const Cell& c = sc.cell(cell);
        profile_update(profiles, {0.0, EpsPdpSetupPayload{cell, rec.network, c.qos}});
        profile_update(profiles, {0.0, RrcReconfigPayload{cell, rec.network, c.tdd_config, c.sib.paging_cycle,
                                                          c.sib.reselection_priority, c.sib.reselection_threshold}});
        profile_update(profiles, {0.0, LocationUpdatePayload{cell, rec.network, c.sib.voice_over_ps}});
        if (predictor) predictor->observe(rec.network, cell, rec.rss, rec.latency, rec.throughput, 0.0);
    }
    if (predictor && !sc.history.empty()) predictor->rebuild();
}

namespace {

// The registered network as the device sees it right now, without scanning.
NetworkScan serving_view(const Scenario& sc, const NetworkId& net, double t) {
    NetworkScan ns{net, {}};
    for (const auto& c : sc.cells_in_band_order(net)) {
        ScanEntry e;
        e.cell_id = c;
        e.completed_at = t;
        e.sib = sc.sib_at(c, t);
        if (sc.cell_available(c, t)) e.rss = sc.rss(c, t);
        ns.cells.push_back(std::move(e));
    }
    return ns;
}

std::vector<NetworkId> monitor_targets(const Scenario& sc, const std::optional<NetworkId>& registered) {
    std::vector<NetworkId> out;
    for (const auto& n : sc.plmn_priority_list)
        if (n != registered) out.push_back(n);
    return out;
}

double value_of(const Scenario& sc, const std::optional<NetworkId>& net, Metric m, double t) {
    if (!net) return sc.performance.outage_value(m);
    const auto rss = sc.network_rss(*net, t);
    return rss ? sc.performance.evaluate(*net, m, *rss) : sc.performance.outage_value(m);
}

}  // namespace

RunArtifacts run_scenario_full(const Scenario& scenario, const RunConfig& config) {
    if (!(config.epoch > 0.0)) throw Error(Errc::InvalidValue, "epoch interval must be positive");
    auto strategy = StrategyRegistry::instance().create(config.strategy);
    auto sc = std::make_shared<const Scenario>(apply_overrides(scenario, config));
    const bool oracle = strategy->is_oracle();

    Engine::Options opts;
    opts.measurement_interval = config.epoch;
    opts.network_reselection = !oracle;
    Engine engine(sc, opts);

    RunArtifacts art;
    CarrierPredictor predictor(art.profiles);
    replay_history(*sc, art.profiles, &predictor);

    engine.add_observer([&art](Engine&, const CellularEvent& ev) { profile_update(art.profiles, ev); });
    if (!oracle) engine.add_observer(LegacySelection{});

    std::vector<std::shared_ptr<MonitorSession>> sessions;
    std::size_t no_window = 0;

    MonitorCallback on_scan = [&](Engine& e, const ScanResult& scan) -> bool {
        if (scan.partial && !strategy->decides_on_partial()) return false;
        const auto registered = e.state().registered;
        ScanResult view = scan;
        if (registered && !view.contains(*registered)) view.networks.push_back(serving_view(*sc, *registered, e.now()));
        GuardOutcome g = filter_candidates(view, *sc, art.profiles, sc->requirements, registered);
        for (auto& v : g.verdicts) art.verdicts.push_back({e.now(), v});
        for (auto& w : g.warnings) art.guard_warnings.push_back(w);

        StrategyContext ctx{g.filtered, *sc, &art.profiles, &predictor, &sc->billing, registered, e.now(), config.metric};
        const Decision d = run_strategy(*strategy, ctx, &art.strategy_issues);
        if (d.action != Action::kSwitch) return false;
        try {
            direct_switch(e, g.filtered, *d.target);
            return true;
        } catch (const Error& err) {
            art.strategy_issues.push_back({e.now(), strategy->name(), err.what()});
            return false;
        }
    };

    MetricsReport& rep = art.report;
    std::vector<std::string> chosen, optimal;
    std::vector<double> xs, xopt;

    engine.start();
    const double horizon = engine.horizon();
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * config.epoch;
        if (t >= horizon) break;
        engine.run_until(t);

        const auto best = oracle_optimal(*sc, t, config.metric);
        if (oracle) engine.teleport(best);

        const auto& reg = engine.state().registered;
        EpochRecord er{t, reg.value_or(kNoNetwork), best.value_or(kNoNetwork), value_of(*sc, reg, config.metric, t),
                       value_of(*sc, best, config.metric, t)};
        chosen.push_back(er.chosen);
        optimal.push_back(er.optimal);
        xs.push_back(er.x);
        xopt.push_back(er.x_opt);
        rep.epochs.push_back(std::move(er));

        if (oracle || !strategy->uses_monitor()) continue;
        if (reg) {
            const CellId& cell = *engine.state().serving_cell;
            if (const auto rss = sc->network_rss(*reg, t))
                predictor.observe(*reg, cell, *rss, value_of(*sc, reg, Metric::kLatency, t),
                                  value_of(*sc, reg, Metric::kThroughput, t), t);
        }
        const bool busy = engine.switch_in_progress() || (!sessions.empty() && !sessions.back()->finished(engine));
        if (!reg || busy) continue;
        try {
            MonitorRequest req{monitor_targets(*sc, reg), config.disruption_avoidance};
            sessions.push_back(MonitorSession::start(engine, req, on_scan, &art.monitor_log));
        } catch (const Error& err) {
            if (err.code() != Errc::NoSleepWindow) throw;
            ++no_window;
        }
    }
    engine.run();

    rep.scenario = sc->name;
    rep.strategy = strategy->name();
    rep.metric = config.metric;
    rep.seed = sc->seed;
    rep.epoch = config.epoch;
    rep.disruption_avoidance = config.disruption_avoidance;
    rep.platform_overhead = sc->platform_overhead;
    rep.core = compute_metrics(chosen, optimal, xs, xopt);
    rep.switches = engine.switch_log();
    for (const auto& s : rep.switches)
        if (s.success && s.from && s.to && sc->network(*s.from).plmn != sc->network(*s.to).plmn)
            ++rep.inter_carrier_in_service;
    rep.unregistered_time = engine.unregistered_time();
    for (const auto& s : sessions) {
        rep.scan_elapsed += s->result().elapsed;
        rep.cells_scanned += s->result().cells_scanned;
    }
    rep.monitor_passes = sessions.size();
    art.deliveries = engine.deliveries();
    for (const auto& d : art.deliveries) {
        if (d.status == DeliveryStatus::kDelivered) ++rep.deliveries.delivered;
        else if (d.status == DeliveryStatus::kDelayed) ++rep.deliveries.delayed;
        else ++rep.deliveries.lost;
    }
    rep.guard_removals = art.verdicts.size();
    rep.warnings = rep.core.warnings;
    if (no_window > 0)
        rep.warnings.push_back("NO_SLEEP_WINDOW: " + std::to_string(no_window) + " monitoring pass(es) deferred");
    for (const auto& issue : art.strategy_issues)
        rep.warnings.push_back("t=" + format_number(issue.time) + " " + issue.message);
    art.events = engine.event_log();
    return art;
}

MetricsReport run_scenario(const Scenario& scenario, const RunConfig& config) {
    return run_scenario_full(scenario, config).report;
}

MetricsReport run_scenario(const RunConfig& config) {
    return run_scenario(load_valid_scenario(config.scenario_path), config);
}

GuardOutcome guard_snapshot(const Scenario& scenario, double t) {
    auto sc = std::make_shared<const Scenario>(scenario);
    Engine engine(sc);
    ProfileStore profiles;
    replay_history(*sc, profiles, nullptr);
    engine.add_observer([&profiles](Engine&, const CellularEvent& ev) { profile_update(profiles, ev); });
    engine.add_observer(LegacySelection{});
    engine.start();
    engine.run_until(t);
    const auto registered = engine.state().registered;
    ScanResult scan = monitor(engine, {monitor_targets(*sc, registered), true}, nullptr);
    if (registered && !scan.contains(*registered)) scan.networks.push_back(serving_view(*sc, *registered, engine.now()));
    return filter_candidates(scan, *sc, profiles, sc->requirements, registered);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::ordered_json;

ordered_json opt_json(const std::optional<NetworkId>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json switch_json(const SwitchRecord& s) {
    return {{"t_start", s.t_start},     {"t_end", s.t_end},           {"from", opt_json(s.from)},
            {"to", opt_json(s.to)},     {"kind", to_string(s.kind)},  {"n_t", s.n_t},
            {"scan_cost", s.scan_cost}, {"attach_cost", s.attach_cost}, {"overhead", s.overhead},
            {"attempts", s.attempts},   {"success", s.success},       {"disruption", s.disruption()}};
}

std::string num(double v) { return format_number(v); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::pair<std::string, std::string>> summary_pairs(const MetricsReport& r) {
    return {
        {"schema_version", "1"},
        {"scenario", r.scenario},
        {"strategy", r.strategy},
        {"metric", std::string(to_string(r.metric))},
        {"seed", std::to_string(r.seed)},
        {"epochs", std::to_string(r.core.epochs)},
        {"hit_ratio", num(r.core.hit_ratio)},
        {"gamma_plus_count", std::to_string(r.core.gamma_plus.size())},
        {"gamma_plus_median", num(r.core.gamma_plus_median)},
        {"gamma_plus_max", num(r.core.gamma_plus_max)},
        {"zero_optimum_epochs", std::to_string(r.core.zero_optimum)},
        {"switch_count", std::to_string(r.switches.size())},
        {"inter_carrier_switches_in_service", std::to_string(r.inter_carrier_in_service)},
        {"disruption_total", num(r.disruption_total())},
        {"disruption_mean", num(r.disruption_mean())},
        {"unregistered_time", num(r.unregistered_time)},
        {"scan_elapsed", num(r.scan_elapsed)},
        {"cells_scanned", std::to_string(r.cells_scanned)},
        {"monitor_passes", std::to_string(r.monitor_passes)},
        {"delivered", std::to_string(r.deliveries.delivered)},
        {"delayed", std::to_string(r.deliveries.delayed)},
        {"lost", std::to_string(r.deliveries.lost)},
        {"guard_removals", std::to_string(r.guard_removals)},
    };
}

}  // namespace

ordered_json report_to_json(const MetricsReport& r) {
    ordered_json j;
    j["schema_version"] = 1;
    j["scenario"] = r.scenario;
    j["strategy"] = r.strategy;
    j["metric"] = to_string(r.metric);
    j["seed"] = r.seed;
    j["epoch"] = r.epoch;
    j["disruption_avoidance"] = r.disruption_avoidance;
    j["platform_overhead"] = r.platform_overhead;

    ordered_json s;
    s["epochs"] = r.core.epochs;
    s["hit_ratio"] = r.core.hit_ratio;
    s["gamma_plus_count"] = r.core.gamma_plus.size();
    s["gamma_plus_median"] = r.core.gamma_plus_median;
    s["gamma_plus_max"] = r.core.gamma_plus_max;
    s["zero_optimum_epochs"] = r.core.zero_optimum;
    s["switch_count"] = r.switches.size();
    s["inter_carrier_switches_in_service"] = r.inter_carrier_in_service;
    s["disruption_total"] = r.disruption_total();
    s["disruption_mean"] = r.disruption_mean();
    s["unregistered_time"] = r.unregistered_time;
    s["scan_elapsed"] = r.scan_elapsed;
    s["cells_scanned"] = r.cells_scanned;
    s["monitor_passes"] = r.monitor_passes;
    s["deliveries"] = {{"delivered", r.deliveries.delivered},
                       {"delayed", r.deliveries.delayed},
                       {"lost", r.deliveries.lost}};
    s["guard_removals"] = r.guard_removals;
    j["summary"] = std::move(s);

    ordered_json epochs = ordered_json::array();
    for (std::size_t i = 0; i < r.epochs.size(); ++i) {
        const auto& e = r.epochs[i];
        const auto& g = i < r.core.gamma.size() ? r.core.gamma[i] : std::nullopt;
        epochs.push_back({{"t", e.t},
                          {"chosen", e.chosen},
                          {"optimal", e.optimal},
                          {"x", e.x},
                          {"x_opt", e.x_opt},
                          {"gamma", g ? ordered_json(*g) : ordered_json(nullptr)}});
    }
    j["epochs"] = std::move(epochs);
    ordered_json sw = ordered_json::array();
    for (const auto& s2 : r.switches) sw.push_back(switch_json(s2));
    j["switches"] = std::move(sw);
    j["warnings"] = r.warnings;
    return j;
}

std::string report_to_csv(const MetricsReport& r) {
    std::ostringstream os;
    os << "t,chosen,optimal,x,x_opt,gamma\n";
    for (std::size_t i = 0; i < r.epochs.size(); ++i) {
        const auto& e = r.epochs[i];
        const auto& g = i < r.core.gamma.size() ? r.core.gamma[i] : std::nullopt;
        os << num(e.t) << ',' << csv_field(e.chosen) << ',' << csv_field(e.optimal) << ',' << num(e.x) << ','
           << num(e.x_opt) << ',' << (g ? num(*g) : "") << '\n';
    }
    os << "\n# summary\nkey,value\n";
    for (const auto& [k, v] : summary_pairs(r)) os << k << ',' << csv_field(v) << '\n';
    return os.str();
}

std::string serialize_report(const MetricsReport& report, ReportFormat format) {
    return format == ReportFormat::kJson ? report_to_json(report).dump(2) + "\n" : report_to_csv(report);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

void export_report(const MetricsReport& report, ReportFormat format, const std::filesystem::path& path) {
    write_text_file(path, serialize_report(report, format));
}

std::string events_to_ndjson(const std::vector<CellularEvent>& events) {
    std::string out;
    for (const auto& ev : events) out += to_json(ev).dump() + "\n";
    return out;
}

std::string switches_to_csv(const std::vector<SwitchRecord>& switches) {
    std::ostringstream os;
    os << "t_start,t_end,from_network,to_network,kind,n_t,scan_cost,attach_cost,overhead,attempts,success\n";
    for (const auto& s : switches)
        os << num(s.t_start) << ',' << num(s.t_end) << ',' << csv_field(s.from.value_or("")) << ','
           << csv_field(s.to.value_or("")) << ',' << to_string(s.kind) << ',' << s.n_t << ',' << num(s.scan_cost)
           << ',' << num(s.attach_cost) << ',' << num(s.overhead) << ',' << s.attempts << ','
           << (s.success ? "true" : "false") << '\n';
    return os.str();
}

std::string monitor_log_to_csv(const MonitorLog& log) {
    std::ostringstream os;
    os << "record,time,cell,window_start,window_end,elapsed,partial,networks\n";
    for (const auto& s : log.slots)
        os << "slot," << num(s.window.start) << ',' << csv_field(s.cell) << ',' << num(s.window.start) << ','
           << num(s.window.end) << ',' << num(s.elapsed) << ",,\n";
    for (const auto& c : log.callbacks) {
        std::string nets;
        for (const auto& n : c.networks) nets += (nets.empty() ? "" : ";") + n;
        os << "callback," << num(c.time) << ",,,,," << (c.partial ? "true" : "false") << ',' << csv_field(nets)
           << '\n';
    }
    return os.str();
}

std::string verdicts_to_csv(const std::vector<TimedVerdict>& verdicts) {
    std::ostringstream os;
    os << "time,network,verdict,detail\n";
    for (const auto& v : verdicts)
        os << num(v.time) << ',' << csv_field(v.verdict.network) << ',' << to_string(v.verdict.verdict) << ','
           << csv_field(v.verdict.detail) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Comparison

Comparison compare(const Scenario& scenario, const std::vector<RunConfig>& configs, unsigned repeat) {
    repeat = std::max(1u, repeat);
    Comparison cmp;
    cmp.scenario = scenario.name;
    cmp.repeat = repeat;
    if (!configs.empty()) cmp.metric = configs.front().metric;

    std::vector<std::vector<std::future<MetricsReport>>> futures(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (unsigned r = 0; r < repeat; ++r) {
            RunConfig cfg = configs[i];
            cfg.seed = cfg.seed.value_or(scenario.seed) + r;
            futures[i].push_back(std::async(std::launch::async, [&scenario, cfg] { return run_scenario(scenario, cfg); }));
        }

    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::vector<MetricsReport> runs;
        for (auto& f : futures[i]) runs.push_back(f.get());
        auto med = [&](auto get) {
            std::vector<double> v;
            for (const auto& r : runs) v.push_back(get(r));
            return median_of(v);
        };
        ComparisonRow row;
        row.strategy = runs.front().strategy;
        row.hit_ratio = med([](const MetricsReport& r) { return r.core.hit_ratio; });
        row.gamma_plus_median = med([](const MetricsReport& r) { return r.core.gamma_plus_median; });
        row.gamma_plus_max = med([](const MetricsReport& r) { return r.core.gamma_plus_max; });
        row.mean_disruption = med([](const MetricsReport& r) { return r.disruption_mean(); });
        row.total_scan_time = med([](const MetricsReport& r) { return r.scan_elapsed; });
        row.switches = runs.front().switches.size();
        cmp.rows.push_back(row);
        cmp.reports.push_back(std::move(runs.front()));
    }
    return cmp;
}

Comparison compare(const std::vector<RunConfig>& configs, unsigned repeat) {
    if (configs.empty()) return {};
    for (const auto& c : configs)
        if (std::filesystem::absolute(c.scenario_path).lexically_normal() !=
            std::filesystem::absolute(configs.front().scenario_path).lexically_normal())
            throw Error(Errc::ScenarioMismatch, "compared runs must share one scenario");
    return compare(load_valid_scenario(configs.front().scenario_path), configs, repeat);
}

ordered_json comparison_to_json(const Comparison& c) {
    ordered_json j;
    j["schema_version"] = 1;
    j["scenario"] = c.scenario;
    j["metric"] = to_string(c.metric);
    j["repeat"] = c.repeat;
    ordered_json rows = ordered_json::array();
    for (const auto& r : c.rows)
        rows.push_back({{"strategy", r.strategy},
                        {"hit_ratio", r.hit_ratio},
                        {"gamma_plus_median", r.gamma_plus_median},
                        {"gamma_plus_max", r.gamma_plus_max},
                        {"mean_disruption", r.mean_disruption},
                        {"total_scan_time", r.total_scan_time},
                        {"switches", r.switches}});
    j["rows"] = std::move(rows);
    return j;
}

std::string comparison_to_csv(const Comparison& c) {
    std::ostringstream os;
    os << "strategy,hit_ratio,gamma_plus_median,gamma_plus_max,mean_disruption,total_scan_time,switches\n";
    for (const auto& r : c.rows)
        os << csv_field(r.strategy) << ',' << num(r.hit_ratio) << ',' << num(r.gamma_plus_median) << ','
           << num(r.gamma_plus_max) << ',' << num(r.mean_disruption) << ',' << num(r.total_scan_time) << ','
           << r.switches << '\n';
    return os.str();
}

std::string comparison_to_table(const Comparison& c) {
    std::ostringstream os;
    os << "scenario " << c.scenario << ", metric " << to_string(c.metric) << "\n";
    os << std::left << std::setw(14) << "strategy" << std::right << std::setw(10) << "hit" << std::setw(12)
       << "med(g+)" << std::setw(12) << "max(g+)" << std::setw(14) << "disruption" << std::setw(12) << "scan s"
       << std::setw(10) << "switches" << "\n";
    os << std::fixed;
    for (const auto& r : c.rows)
        os << std::left << std::setw(14) << r.strategy << std::right << std::setprecision(3) << std::setw(10)
           << r.hit_ratio << std::setw(12) << r.gamma_plus_median << std::setw(12) << r.gamma_plus_max
           << std::setprecision(2) << std::setw(14) << r.mean_disruption << std::setw(12) << r.total_scan_time
           << std::setw(10) << r.switches << "\n";
    return os.str();
}

std::string gamma_cdf_csv(const Comparison& c) {
    std::ostringstream os;
    os << "strategy,gamma,cdf\n";
    for (const auto& r : c.reports) {
        std::vector<double> g;
        for (const auto& v : r.core.gamma)
            if (v) g.push_back(*v);
        std::sort(g.begin(), g.end());
        for (std::size_t i = 0; i < g.size(); ++i)
            os << csv_field(r.strategy) << ',' << num(g[i]) << ','
               << num(static_cast<double>(i + 1) / static_cast<double>(g.size())) << '\n';
    }
    return os.str();
}

}  // namespace mca
