#include "mca/strategy/strategy.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "mca/core/error.hpp"

namespace mca {

namespace {

// Strongest network among those passing `keep`; ties go to the smaller id.
template <typename Pred>
std::optional<NetworkId> strongest(const ScanResult& scan, Pred keep) {
    std::optional<NetworkId> best;
    double best_rss = -std::numeric_limits<double>::infinity();
    for (const auto& ns : scan.networks) {
        const auto rss = ns.best_rss();
        if (!rss || !keep(ns, *rss)) continue;
        if (!best || *rss > best_rss || (*rss == best_rss && ns.network_id < *best)) {
            best = ns.network_id;
            best_rss = *rss;
        }
    }
    return best;
}

// Better metric wins; equal values go to the smaller id.
struct ArgBest {
    Metric metric;
    std::optional<NetworkId> id;
    double value = 0.0;
    void offer(const NetworkId& net, double v) {
        if (!id || metric_better(metric, v, value) || (v == value && net < *id)) {
            id = net;
            value = v;
        }
    }
};

}  // namespace

std::optional<NetworkId> strategy_radio_only(const ScanResult& scan, const Scenario& sc) {
    auto rat_is = [&](Rat r) { return [&sc, r](const NetworkScan& ns, double) { return sc.network(ns.network_id).rat == r; }; };
    if (auto g4 = strongest(scan, [&](const NetworkScan& ns, double rss) {
            return sc.network(ns.network_id).rat == Rat::k4G && rss > -120.0;
        }))
        return g4;
    if (auto g3 = strongest(scan, rat_is(Rat::k3G))) return g3;
    return strongest(scan, [](const NetworkScan&, double) { return true; });
}

std::optional<NetworkId> strategy_profile_only(const ScanResult& scan, const ProfileStore& profiles) {
    // Rank key: (missing profile, traffic class, delay class, -max DL rate, id). Lower is better.
    using Key = std::tuple<bool, double, double, double, NetworkId>;
    std::optional<Key> best;
    for (const auto& ns : scan.networks) {
        if (!ns.any_available()) continue;
        const auto tc = profiles.network_modal(ns.network_id, field::kTrafficClass);
        const auto parsed = tc ? parse_traffic_class(*tc) : std::nullopt;
        const auto num = [&](const char* f, double fallback) {
            auto s = profiles.network_modal(ns.network_id, f);
            if (!s) return fallback;
            try {
                return std::stod(*s);
            } catch (...) {
                return fallback;
            }
        };
        const bool missing = !parsed;
        Key k{missing, missing ? 99.0 : static_cast<double>(*parsed), num(field::kDelayClass, 99.0),
              -num(field::kMaxDlRate, 0.0), ns.network_id};
        if (!best || k < *best) best = k;
    }
    if (!best) return std::nullopt;
    return std::get<4>(*best);
}

double unit_price(const BillingPlan& plan) {
    if (plan.tiers.empty()) return 0.0;
    for (const auto& tier : plan.tiers)
        if (plan.usage < tier.up_to) return tier.price;
    return plan.tiers.back().price;
}

std::optional<NetworkId> strategy_min_billing(const ScanResult& scan, const Scenario& sc,
                                              const std::map<std::string, BillingPlan>& plans) {
    std::optional<NetworkId> best;
    double best_price = 0.0;
    bool any_candidate = false;
    for (const auto& ns : scan.networks) {
        if (!ns.any_available()) continue;
        any_candidate = true;
        auto it = plans.find(sc.network(ns.network_id).plmn);
        if (it == plans.end()) continue;
        const double p = unit_price(it->second);
        if (!best || p < best_price || (p == best_price && ns.network_id < *best)) {
            best = ns.network_id;
            best_price = p;
        }
    }
    if (any_candidate && !best) throw Error(Errc::MissingPlan, "no billing plan for any candidate carrier");
    return best;
}

std::optional<NetworkId> oracle_optimal(const Scenario& sc, double t, Metric metric) {
    ArgBest best{metric, std::nullopt};
    for (const auto& net : sc.networks) {
        const auto rss = sc.network_rss(net.network_id, t);
        if (!rss) continue;
        const bool usable = std::any_of(net.cells.begin(), net.cells.end(), [&](const CellId& c) {
            return sc.cell_available(c, t) && !sc.sib_at(c, t).barred;
        });
        if (!usable) continue;
        best.offer(net.network_id, sc.performance.evaluate(net.network_id, metric, *rss));
    }
    return best.id;
}

// ---------------------------------------------------------------------------

Decision run_strategy(Strategy& strategy, const StrategyContext& ctx, std::vector<StrategyIssue>* issues) {
    auto fail = [&](const std::string& msg) {
        if (issues) issues->push_back({ctx.now, strategy.name(), std::string(to_string(Errc::StrategyException)) + ": " + msg});
        Decision d = Decision::stay("rejected: " + msg);
        d.decided_on_partial = ctx.scan.partial;
        return d;
    };
    Decision d;
    try {
        d = strategy.decide(ctx);
    } catch (const std::exception& e) {
        return fail(e.what());
    } catch (...) {
        return fail("unknown exception");
    }
    d.decided_on_partial = ctx.scan.partial;
    if (d.action == Action::kStay) return d;
    if (!d.target) return fail("switch without a target");
    const auto* ns = ctx.scan.find(*d.target);
    if (!ns || !ns->any_available()) return fail("target " + *d.target + " is not in the scan");
    if (ctx.registered == d.target) {
        d.action = Action::kStay;
        d.reason += " (already registered)";
    }
    return d;
}

namespace {

Decision from_choice(const std::optional<NetworkId>& pick, std::string why) {
    if (!pick) return Decision::stay("no candidate");
    return Decision::to(*pick, std::move(why));
}

class BaselineStrategy : public Strategy {
public:
    std::string name() const override { return "baseline"; }
    bool uses_monitor() const override { return false; }
    Decision decide(const StrategyContext&) override { return Decision::stay("legacy selection only"); }
};

class RadioOnlyStrategy : public Strategy {
public:
    std::string name() const override { return "radio-only"; }
    Decision decide(const StrategyContext& ctx) override {
        return from_choice(strategy_radio_only(ctx.scan, ctx.scenario), "strongest 4G above -120 dBm, else 3G");
    }
};

class ProfileOnlyStrategy : public Strategy {
public:
    std::string name() const override { return "profile-only"; }
    Decision decide(const StrategyContext& ctx) override {
        if (!ctx.profiles) throw Error(Errc::MissingProfile, "no profile store");
        return from_choice(strategy_profile_only(ctx.scan, *ctx.profiles), "highest QoS profile");
    }
};

// Predicted metric for every available candidate, best first.
std::optional<NetworkId> best_predicted(const StrategyContext& ctx, Metric metric, double rss_floor) {
    if (!ctx.predictor || ctx.predictor->tree(metric).tree().empty()) return std::nullopt;
    ArgBest best{metric, std::nullopt};
    for (const auto& ns : ctx.scan.networks) {
        const ScanEntry* e = ns.best_entry();
        if (!e || *e->rss <= rss_floor) continue;
        if (auto v = ctx.predictor->predict(ns.network_id, e->cell_id, *e->rss, metric)) best.offer(ns.network_id, *v);
    }
    return best.id;
}

class TreeStrategy : public Strategy {
public:
    std::string name() const override { return "tree"; }
    Decision decide(const StrategyContext& ctx) override {
        return from_choice(best_predicted(ctx, ctx.metric, -std::numeric_limits<double>::infinity()),
                           "best predicted " + std::string(to_string(ctx.metric)));
    }
};

class MinLatencyStrategy : public Strategy {
public:
    std::string name() const override { return "min-latency"; }
    bool decides_on_partial() const override { return true; }
    Decision decide(const StrategyContext& ctx) override {
        return from_choice(best_predicted(ctx, Metric::kLatency, kMinLatencyRssFloor),
                           "lowest predicted latency above -100 dBm");
    }
};

class MinBillingStrategy : public Strategy {
public:
    std::string name() const override { return "min-billing"; }
    Decision decide(const StrategyContext& ctx) override {
        static const std::map<std::string, BillingPlan> kNone;
        return from_choice(strategy_min_billing(ctx.scan, ctx.scenario, ctx.billing ? *ctx.billing : kNone),
                           "lowest per-unit price");
    }
};

class OptimalStrategy : public Strategy {
public:
    std::string name() const override { return "optimal"; }
    bool is_oracle() const override { return true; }
    Decision decide(const StrategyContext& ctx) override {
        const auto best = oracle_optimal(ctx.scenario, ctx.now, ctx.metric);
        if (!best || !ctx.scan.contains(*best)) return Decision::stay("optimum not in scan");
        return Decision::to(*best, "ground truth optimum");
    }
};

template <typename T>
StrategyFactory make() {
    return [] { return std::make_unique<T>(); };
}

}  // namespace

StrategyRegistry::StrategyRegistry() {
    factories_["baseline"] = make<BaselineStrategy>();
    factories_["radio-only"] = make<RadioOnlyStrategy>();
    factories_["profile-only"] = make<ProfileOnlyStrategy>();
    factories_["tree"] = make<TreeStrategy>();
    factories_["min-latency"] = make<MinLatencyStrategy>();
    factories_["min-billing"] = make<MinBillingStrategy>();
    factories_["optimal"] = make<OptimalStrategy>();
}

StrategyRegistry& StrategyRegistry::instance() {
    static StrategyRegistry registry;
    return registry;
}

void StrategyRegistry::add(const std::string& name, StrategyFactory factory) { factories_[name] = std::move(factory); }

std::unique_ptr<Strategy> StrategyRegistry::create(const std::string& name) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) throw Error(Errc::UnknownStrategy, "no strategy named '" + name + "'");
    return it->second();
}

std::vector<std::string> StrategyRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [n, f] : factories_) out.push_back(n);
    return out;
}

}  // namespace mca
