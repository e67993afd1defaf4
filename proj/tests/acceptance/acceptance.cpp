// Acceptance suite: one PASS/FAIL line per criterion, each within its runtime budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cart_oracle.hpp"
#include "mca/core/scenario.hpp"
#include "mca/harness/harness.hpp"
#include "mca/monitor/monitor.hpp"
#include "mca/plmn/switching.hpp"
#include "mca/predict/regression_tree.hpp"

using namespace mca;
namespace fs = std::filesystem;

namespace {

fs::path scenario_path(const std::string& name) { return fs::path(MCA_SCENARIO_DIR) / (name + ".json"); }
Scenario load(const std::string& name) { return load_valid_scenario(scenario_path(name)); }

MetricsReport run(const std::string& name, const std::string& strategy, Metric m = Metric::kThroughput) {
    RunConfig c;
    c.scenario_path = scenario_path(name);
    c.strategy = strategy;
    c.metric = m;
    return run_scenario(c);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= budget_s) {
        o.pass = false;
        o.detail += " [over budget]";
    }
    if (!o.pass) ++failures;
    std::printf("%s [%2d] %s: %s (%.3f s of %.0f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
                secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const SwitchRecord* first_of(const MetricsReport& r, SwitchKind k) {
    for (const auto& s : r.switches)
        if (s.kind == k) return &s;
    return nullptr;
}

// --- 2: random scenarios for the non-disruption property ---------------------

Scenario random_world(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cycles[] = {0.32, 0.64, 1.28, 2.56};
    auto pick_cycle = [&] { return cycles[static_cast<int>(u(rng) * 4) % 4]; };

    Scenario sc;
    sc.name = "random";
    sc.seed = rng();
    sc.horizon = 40.0;
    const int networks = 2 + static_cast<int>(u(rng) * 3);
    for (int n = 0; n < networks; ++n) {
        CarrierNetwork net{"N" + std::to_string(n), "P" + std::to_string(n), u(rng) < 0.5 ? Rat::k4G : Rat::k3G, {}};
        const int cells = n == 0 ? 1 : 1 + static_cast<int>(u(rng) * 4);
        for (int c = 0; c < cells; ++c) {
            Cell cell;
            cell.cell_id = net.network_id + "-c" + std::to_string(c);
            cell.network = net.network_id;
            cell.band = "B" + std::to_string(c % 3);
            cell.scan_time = 0.1 + 1.9 * u(rng);
            cell.sib.paging_cycle = pick_cycle();
            cell.sib.on_duration = cell.sib.paging_cycle * (0.05 + 0.2 * u(rng));
            net.cells.push_back(cell.cell_id);
            sc.trace.cells[cell.cell_id] = {{0.0, -100.0 + 20 * u(rng)}, {40.0, -100.0 + 20 * u(rng)}};
            sc.cells.push_back(cell);
        }
        sc.performance.networks[net.network_id][Metric::kThroughput].points = {{-130.0, 1.0}, {-70.0, 20.0}};
        sc.performance.networks[net.network_id][Metric::kLatency].points = {{-130.0, 300.0}, {-70.0, 30.0}};
        sc.plmn_priority_list.push_back(net.network_id);
        sc.networks.push_back(net);
    }
    sc.device.initial_registration = "N0";
    sc.device.inactivity_tail = u(rng) < 0.5 ? 0.0 : 0.5 * u(rng);
    double t = 0.0;
    while (true) {
        t += 0.2 + 4.0 * u(rng);
        if (t >= 40.0) break;
        sc.workload.push_back({t, u(rng) < 0.7 ? Direction::kDownlink : Direction::kUplink, 0.05 + 2.0 * u(rng)});
    }
    auto res = validate_scenario(sc);
    if (!res.ok()) throw Error(Errc::InvalidScenario, format_issues(res.issues));
    return *res.scenario;
}

// Scans every other network from a random start; counts downlink records
// that were not delivered on time.
std::size_t disturbed_downlink(const Scenario& world, bool avoidance, double start) {
    auto sc = std::make_shared<const Scenario>(world);
    Engine e(sc);
    e.start();
    e.run_until(start);
    std::vector<NetworkId> others(world.plmn_priority_list.begin() + 1, world.plmn_priority_list.end());
    try {
        monitor(e, {others, avoidance}, nullptr);
    } catch (const Error& err) {
        if (err.code() != Errc::NoSleepWindow) throw;
    }
    e.run();
    std::size_t n = 0;
    for (const auto& d : e.deliveries())
        if (d.direction == Direction::kDownlink && d.status != DeliveryStatus::kDelivered) ++n;
    return n;
}

// --- 4: random datasets for the CART oracle ----------------------------------

struct Dataset {
    FeatureSchema schema;
    std::vector<TreeSample> samples;
    TreeParams params;
};

Dataset random_dataset(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dataset d;
    const int features = 1 + static_cast<int>(u(rng) * 6);
    std::vector<int> levels;
    for (int f = 0; f < features; ++f) {
        const bool cat = u(rng) < 0.4;
        d.schema.push_back({"f" + std::to_string(f), cat ? FeatureKind::kCategorical : FeatureKind::kNumeric, f > 0});
        levels.push_back(cat ? 2 + static_cast<int>(u(rng) * 5) : (u(rng) < 0.5 ? 6 : 0));
    }
    const int n = 1 + static_cast<int>(u(rng) * 200);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> w(features);
    for (auto& x : w) x = noise(rng) * 5;
    for (int i = 0; i < n; ++i) {
        TreeSample s;
        double y = 0.0;
        for (int f = 0; f < features; ++f) {
            // Numeric features are either continuous or drawn from a small grid (ties).
            const double v = levels[f] > 0 ? static_cast<double>(static_cast<int>(u(rng) * levels[f]))
                                           : -130.0 + 60.0 * u(rng);
            s.x.push_back(v);
            y += w[f] * (d.schema[f].kind == FeatureKind::kCategorical ? (static_cast<int>(v) % 2 ? 3.0 : -1.0)
                                                                        : v / 10.0);
        }
        s.y = y + noise(rng);
        d.samples.push_back(std::move(s));
    }
    d.params.min_samples_leaf = 1 + static_cast<std::size_t>(u(rng) * 4);
    d.params.max_depth = u(rng) < 0.3 ? 3 + static_cast<std::size_t>(u(rng) * 5) : 32;
    d.params.min_impurity_decrease = u(rng) < 0.3 ? 0.05 * u(rng) : 0.0;
    return d;
}

}  // namespace

int main() {
    criterion(1, "switch timing model", 1.0, [] {
        const auto direct = run("direct_switch", "radio-only");
        const auto* d = first_of(direct, SwitchKind::kDirect);
        const auto base = run("baseline36", "baseline");
        const auto* b = first_of(base, SwitchKind::kBaseline);
        if (!d || !b) return Outcome{false, "missing switch record"};
        const double rel = std::abs(b->disruption() - 17.3) / 17.3;
        const bool ok = std::abs(d->disruption() - 3.0) <= 1e-9 && d->n_t == 1 && b->n_t == 36 &&
                        std::abs(b->scan_cost - 14.4) < 1e-9 && rel <= 0.05;
        return Outcome{ok, fmt("direct %.12f s (n_t=1), baseline %.6f s = scan %.3f + attach %.3f", d->disruption(),
                               b->disruption(), b->scan_cost, b->attach_cost) +
                               fmt(", %.2f%% from the logged 17.3 s", 100 * rel)};
    });

    criterion(2, "non-disruptive monitoring", 30.0, [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> start(0.0, 5.0);
        std::size_t avoid_bad = 0, plain_bad = 0, plain_worlds = 0;
        const int worlds = 1000;
        for (int i = 0; i < worlds; ++i) {
            const Scenario w = random_world(rng);
            const double s = start(rng);
            avoid_bad += disturbed_downlink(w, true, s);
            const auto p = disturbed_downlink(w, false, s);
            plain_bad += p;
            plain_worlds += p > 0;
        }
        return Outcome{avoid_bad == 0 && plain_bad > 0,
                       fmt("%.0f worlds: %.0f disturbed downlink records with avoidance, %.0f without (%.0f worlds)",
                           worlds, static_cast<double>(avoid_bad), static_cast<double>(plain_bad),
                           static_cast<double>(plain_worlds))};
    });

    criterion(3, "minimal search saving", 1.0, [] {
        auto sc = std::make_shared<const Scenario>(load("minimal_search"));
        Engine e(sc);
        e.start();
        e.run_until(1.0);
        const auto full = exhaustive_scan(*sc, e.now());
        const auto part = monitor(e, {{"B-4G", "C-4G"}, true}, nullptr);
        const double cell_saving = 1.0 - static_cast<double>(part.cells_scanned) / full.cells_scanned;
        const double time_saving = 1.0 - part.elapsed / full.elapsed;
        return Outcome{cell_saving >= 0.5 - 1e-12 && time_saving >= 0.5 - 1e-12 && !part.partial,
                       fmt("cells %.0f vs %.0f, scan time %.2f s vs %.2f s", part.cells_scanned, full.cells_scanned,
                           part.elapsed, full.elapsed) +
                           fmt(" (%.1f%% / %.1f%% shorter)", 100 * cell_saving, 100 * time_saving)};
    });

    criterion(4, "CART matches brute-force oracle", 60.0, [] {
        std::mt19937_64 rng(77);
        std::size_t queries = 0, mismatches = 0;
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const Dataset d = random_dataset(rng);
            const auto tree = tree_train(d.samples, d.schema, d.params);
            const oracle::BruteCart ref(d.samples, d.schema, d.params);
            std::vector<std::vector<double>> qs;
            for (const auto& s : d.samples) qs.push_back(s.x);
            std::uniform_int_distribution<std::size_t> pick(0, d.samples.size() - 1);
            for (int i = 0; i < 50; ++i) {  // mix coordinates of training points
                std::vector<double> q;
                for (std::size_t f = 0; f < d.schema.size(); ++f) q.push_back(d.samples[pick(rng)].x[f]);
                qs.push_back(q);
            }
            for (const auto& q : qs) {
                const double diff = std::abs(tree.predict(q) - ref.predict(q));
                worst = std::max(worst, diff);
                mismatches += diff > 1e-9;
                ++queries;
            }
        }
        return Outcome{mismatches == 0, fmt("100 datasets, %.0f queries, %.0f mismatches, max |diff| %.2e",
                                            static_cast<double>(queries), static_cast<double>(mismatches), worst)};
    });

    criterion(5, "branch cache transparency", 10.0, [] {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const FeatureSchema schema{{"rss", FeatureKind::kNumeric, false},
                                   {"traffic_class", FeatureKind::kCategorical, true},
                                   {"delay_class", FeatureKind::kNumeric, true},
                                   {"max_dl", FeatureKind::kNumeric, true},
                                   {"tdd", FeatureKind::kCategorical, true}};
        // A handful of carriers, each with one profile assignment.
        std::vector<std::vector<double>> profiles;
        for (int p = 0; p < 8; ++p)
            profiles.push_back({static_cast<double>(p % 4), static_cast<double>(1 + p % 3),
                                static_cast<double>(50 * (1 + p % 5)), static_cast<double>(p % 2)});
        std::vector<TreeSample> s;
        for (int i = 0; i < 2000; ++i) {
            const auto& pr = profiles[static_cast<std::size_t>(u(rng) * profiles.size())];
            const double rss = -135 + 65 * u(rng);
            std::vector<double> x{rss};
            x.insert(x.end(), pr.begin(), pr.end());
            s.push_back({x, (rss + 140) * (1 + pr[0]) / pr[1] + pr[2] / 10 + 5 * u(rng)});
        }
        const auto tree = tree_train(s, schema);
        BranchCache cache;
        std::size_t plain = 0, cached = 0, differ = 0;
        for (int i = 0; i < 10000; ++i) {
            const auto& pr = profiles[static_cast<std::size_t>(u(rng) * profiles.size())];
            std::vector<double> q{-140 + 75 * u(rng)};
            q.insert(q.end(), pr.begin(), pr.end());
            differ += tree.predict(q, &plain) != tree.predict_cached(q, cache, &cached);
        }
        return Outcome{differ == 0 && cached < plain,
                       fmt("10000 queries, %.0f differing, node tests %.0f cached vs %.0f plain",
                           static_cast<double>(differ), static_cast<double>(cached), static_cast<double>(plain))};
    });

    criterion(6, "fault guard soundness", 5.0, [] {
        struct Case {
            const char* name;
            Verdict expect;
        };
        const Case faulty[] = {{"fault_barred", Verdict::kBarred},
                               {"fault_csfb", Verdict::kIncompleteService},
                               {"fault_threshold", Verdict::kMobilityConflict}};
        bool ok = true;
        std::string detail;
        for (const auto& c : faulty) {
            const auto g = guard_snapshot(load(c.name), 1.0);
            const bool hit = g.verdicts.size() == 1 && g.verdicts[0].network == "B-4G" && g.verdicts[0].verdict == c.expect &&
                             !g.filtered.contains("B-4G");
            ok &= hit;
            detail += std::string(c.name) + "=" + (g.verdicts.empty() ? "none" : std::string(to_string(g.verdicts[0].verdict))) + " ";
            const auto ctl = guard_snapshot(load(std::string(c.name) + "_control"), 1.0);
            ok &= ctl.verdicts.empty() && ctl.filtered.contains("B-4G");
            detail += "control=" + std::to_string(ctl.verdicts.size()) + " removed; ";
        }
        return Outcome{ok, detail};
    });

    criterion(7, "legacy inertia and intra-carrier preference", 5.0, [] {
        const Scenario sc = load("carrier_inertia");
        const auto base = run("carrier_inertia", "baseline", Metric::kLatency);
        const auto icell = run("carrier_inertia", "min-latency", Metric::kLatency);
        std::size_t seg_a_moves = base.inter_carrier_in_service, p3 = 0, p3_total = 0, ml = 0;
        for (std::size_t i = 0; i < base.epochs.size(); ++i) {
            const double t = base.epochs[i].t;
            if (t < 70.0) continue;
            ++p3_total;
            const bool s_stronger = *sc.network_rss("S-4G", t) > *sc.network_rss("T-3G", t);
            p3 += base.epochs[i].chosen == "T-3G" && s_stronger;
            ml += icell.epochs[i].chosen == "S-4G";
        }
        // In the weak-but-alive segment the baseline stays on T-4G throughout.
        bool stayed = true;
        for (const auto& e : base.epochs)
            if (e.t < 60.0) stayed &= e.chosen == "T-4G";
        const bool ok = seg_a_moves == 0 && stayed && p3 == p3_total && ml == p3_total && p3_total > 0;
        return Outcome{ok, fmt("baseline inter-carrier moves in service %.0f; segment B: baseline on T-3G %.0f/%.0f, "
                               "min-latency on S-4G %.0f",
                               static_cast<double>(seg_a_moves), static_cast<double>(p3),
                               static_cast<double>(p3_total), static_cast<double>(ml)) +
                               fmt("/%.0f", static_cast<double>(p3_total))};
    });

    criterion(8, "strategy ordering", 30.0, [] {
        std::vector<RunConfig> cfgs;
        for (const auto* s : {"radio-only", "profile-only", "tree"}) {
            RunConfig c;
            c.scenario_path = scenario_path("benchmark");
            c.strategy = s;
            cfgs.push_back(c);
        }
        const auto cmp = compare(cfgs);
        const double radio = cmp.rows[0].hit_ratio, profile = cmp.rows[1].hit_ratio, tree = cmp.rows[2].hit_ratio;
        return Outcome{tree > radio && tree > profile && tree >= 0.85,
                       fmt("hit ratio tree %.3f, radio-only %.3f, profile-only %.3f", tree, radio, profile)};
    });

    criterion(9, "oracle and determinism", 10.0, [] {
        bool ok = true;
        int n = 0;
        for (const auto& entry : fs::directory_iterator(MCA_SCENARIO_DIR)) {
            if (entry.path().extension() != ".json") continue;
            const std::string name = entry.path().stem().string();
            for (Metric m : {Metric::kThroughput, Metric::kLatency}) {
                const auto r = run(name, "optimal", m);
                std::vector<double> g;
                for (const auto& x : r.core.gamma)
                    if (x) g.push_back(*x);
                std::sort(g.begin(), g.end());
                const double med = g.empty() ? 0.0 : g[g.size() / 2];
                ok &= r.core.hit_ratio == 1.0 && med == 0.0 && r.core.gamma_plus.empty();
            }
            for (const auto* s : {"tree", "baseline", "min-latency"}) {
                ok &= serialize_report(run(name, s), ReportFormat::kJson) ==
                      serialize_report(run(name, s), ReportFormat::kJson);
            }
            ++n;
        }
        return Outcome{ok && n > 0, std::to_string(n) + " bundled scenarios: optimal hit ratio 1.0, median gamma 0; "
                                                        "repeated runs byte-identical"};
    });

    criterion(10, "platform overhead dominates switch time", 1.0, [] {
        const auto r = run("lower_bound_gap", "radio-only");
        const auto* d = first_of(r, SwitchKind::kDirect);
        if (!d) return Outcome{false, "no direct switch"};
        const double share = (d->disruption() - d->attach_cost) / d->disruption();
        return Outcome{share > 0.70, fmt("disruption %.3f s, attach %.3f s, overhead %.3f s: %.1f%% beyond attach",
                                         d->disruption(), d->attach_cost, d->overhead, 100 * share)};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
