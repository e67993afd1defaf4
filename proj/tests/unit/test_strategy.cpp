#include <gtest/gtest.h>

#include "builders.hpp"
#include "mca/strategy/strategy.hpp"

using namespace mca;
using mca::testing::entry;
using mca::testing::ScenarioBuilder;

namespace {

Scenario four() {
    return ScenarioBuilder()
        .network("T-4G", "T")
        .network("S-4G", "S")
        .network("T-3G", "T", Rat::k3G)
        .network("S-3G", "S", Rat::k3G)
        .cell("t4", "T-4G", -90)
        .cell("s4", "S-4G", -90)
        .cell("t3", "T-3G", -90)
        .cell("s3", "S-3G", -90)
        .build();
}

ScanResult scan_of(std::vector<std::pair<std::string, double>> v) {
    static const std::map<std::string, std::string> cell{{"T-4G", "t4"}, {"S-4G", "s4"}, {"T-3G", "t3"}, {"S-3G", "s3"}};
    ScanResult s;
    for (auto& [n, r] : v) s.networks.push_back({n, {entry(cell.at(n), r)}});
    return s;
}

void qos(ProfileStore& p, const std::string& net, const std::string& cell, TrafficClass tc, int delay, double dl) {
    QosConfig q;
    q.traffic_class = tc;
    q.delay_class = delay;
    q.max_dl_rate = dl;
    profile_update(p, {0.0, EpsPdpSetupPayload{cell, net, q}});
}

struct Throwing : Strategy {
    std::string name() const override { return "throwing"; }
    Decision decide(const StrategyContext&) override { throw std::runtime_error("boom"); }
};
struct Stray : Strategy {
    std::string name() const override { return "stray"; }
    Decision decide(const StrategyContext&) override { return Decision::to("Q-4G", "nowhere"); }
};

}  // namespace

TEST(RadioOnly, Only4GAboveFloor) {
    const auto sc = four();
    EXPECT_EQ(strategy_radio_only(scan_of({{"T-4G", -115}, {"S-4G", -125}, {"S-3G", -90}}), sc), "T-4G");
}

TEST(RadioOnly, Strongest3GWhenNo4GQualifies) {
    const auto sc = four();
    EXPECT_EQ(strategy_radio_only(scan_of({{"T-4G", -128}, {"S-4G", -126}, {"T-3G", -102}, {"S-3G", -95}}), sc),
              "S-3G");
}

TEST(RadioOnly, SingleCandidate) {
    const auto sc = four();
    EXPECT_EQ(strategy_radio_only(scan_of({{"S-4G", -130}}), sc), "S-4G");
}

TEST(ProfileOnly, HigherClassWins) {
    ProfileStore p;
    qos(p, "T-4G", "t4", TrafficClass::kInteractive, 1, 100);
    qos(p, "S-4G", "s4", TrafficClass::kBackground, 4, 300);
    EXPECT_EQ(strategy_profile_only(scan_of({{"T-4G", -100}, {"S-4G", -80}}), p), "T-4G");
}

TEST(ProfileOnly, EqualClassesGoToHigherRate) {
    ProfileStore p;
    qos(p, "T-4G", "t4", TrafficClass::kInteractive, 1, 200);
    qos(p, "S-4G", "s4", TrafficClass::kInteractive, 1, 256);
    EXPECT_EQ(strategy_profile_only(scan_of({{"T-4G", -100}, {"S-4G", -80}}), p), "S-4G");
    EXPECT_EQ(strategy_profile_only(scan_of({{"T-4G", -100}}), p), "T-4G");
}

TEST(MinBilling, TieredPlanLookup) {
    const auto sc = four();
    const double inf = std::numeric_limits<double>::infinity();
    std::map<std::string, BillingPlan> plans{{"T", {{{inf, 10.0}}, 0.0}}, {"S", {{{1.0, 0.0}, {inf, 2.0}}, 0.5}}};
    const auto scan = scan_of({{"T-4G", -90}, {"S-4G", -90}});
    EXPECT_EQ(strategy_min_billing(scan, sc, plans), "S-4G");
    plans["S"].usage = 5.0;
    EXPECT_DOUBLE_EQ(unit_price(plans["S"]), 2.0);
    EXPECT_EQ(strategy_min_billing(scan, sc, plans), "S-4G");
    plans["S"] = plans["T"];
    EXPECT_EQ(strategy_min_billing(scan, sc, plans), "S-4G");  // lexicographic: "S-4G" < "T-4G"
}

TEST(MinBilling, NoPlanAtAllThrows) {
    const auto sc = four();
    try {
        strategy_min_billing(scan_of({{"T-4G", -90}}), sc, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingPlan);
    }
}

TEST(Oracle, ArgmaxArgminAndAvailability) {
    auto b = ScenarioBuilder().network("A", "A").network("B", "B").cell("a", "A", -90).cell("b", "B", -90);
    b.raw().performance.networks["A"][Metric::kThroughput].points = {{-100.0, 12.0}};
    b.raw().performance.networks["B"][Metric::kThroughput].points = {{-100.0, 30.0}};
    b.raw().performance.networks["A"][Metric::kLatency].points = {{-100.0, 40.0}};
    b.raw().performance.networks["B"][Metric::kLatency].points = {{-100.0, 80.0}};
    auto sc = b.build();
    EXPECT_EQ(oracle_optimal(sc, 0.0, Metric::kThroughput), "B");
    EXPECT_EQ(oracle_optimal(sc, 0.0, Metric::kLatency), "A");
    sc.trace.cells["b"] = {{0.0, -150.0}};
    EXPECT_EQ(oracle_optimal(sc, 0.0, Metric::kThroughput), "A");
}

TEST(MinLatency, RssFloorBeatsPrediction) {
    const auto sc = ScenarioBuilder()
                        .network("A", "A")
                        .network("B", "B")
                        .cell("a", "A", -95)
                        .cell("b", "B", -105)
                        .build();
    ProfileStore p;
    qos(p, "A", "a", TrafficClass::kInteractive, 1, 100);
    qos(p, "B", "b", TrafficClass::kInteractive, 2, 100);
    CarrierPredictor pred(p);
    pred.observe("A", "a", -95, 80, 10, 0);
    pred.observe("B", "b", -105, 40, 10, 0);
    pred.rebuild();
    ScanResult scan;
    scan.networks = {{"A", {entry("a", -95.0)}}, {"B", {entry("b", -105.0)}}};
    auto s = StrategyRegistry::instance().create("min-latency");
    StrategyContext ctx{scan, sc, &p, &pred, nullptr, std::nullopt, 0.0, Metric::kLatency};
    const auto d = run_strategy(*s, ctx);
    EXPECT_EQ(d.action, Action::kSwitch);
    EXPECT_EQ(d.target, "A");
    EXPECT_EQ(pred.predict("B", "b", -105, Metric::kLatency), 40.0);
}

TEST(RunStrategy, EmptyScanStays) {
    const auto sc = four();
    ScanResult empty;
    for (const auto& name : StrategyRegistry::instance().names()) {
        if (name == "min-billing") continue;
        auto s = StrategyRegistry::instance().create(name);
        StrategyContext ctx{empty, sc, nullptr, nullptr, nullptr, std::nullopt, 0.0, Metric::kThroughput};
        ProfileStore p;
        ctx.profiles = &p;
        EXPECT_EQ(run_strategy(*s, ctx).action, Action::kStay) << name;
    }
}

TEST(RunStrategy, StrayTargetIsRejected) {
    const auto sc = four();
    const auto scan = scan_of({{"T-4G", -90}});
    std::vector<StrategyIssue> issues;
    Stray s;
    StrategyContext ctx{scan, sc, nullptr, nullptr, nullptr, std::nullopt, 0.0, Metric::kThroughput};
    EXPECT_EQ(run_strategy(s, ctx, &issues).action, Action::kStay);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].message.rfind("STRATEGY_EXCEPTION", 0), 0u);
}

TEST(RunStrategy, ThrowingStrategyStays) {
    const auto sc = four();
    const auto scan = scan_of({{"T-4G", -90}});
    std::vector<StrategyIssue> issues;
    Throwing s;
    StrategyContext ctx{scan, sc, nullptr, nullptr, nullptr, std::nullopt, 0.0, Metric::kThroughput};
    EXPECT_EQ(run_strategy(s, ctx, &issues).action, Action::kStay);
    EXPECT_EQ(issues.size(), 1u);
}

TEST(Registry, UnknownNameThrows) {
    try {
        StrategyRegistry::instance().create("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownStrategy);
    }
}
