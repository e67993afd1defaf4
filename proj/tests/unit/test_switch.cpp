#include <gtest/gtest.h>

#include "builders.hpp"
#include "mca/plmn/switching.hpp"

using namespace mca;
using mca::testing::entry;
using mca::testing::ScenarioBuilder;

namespace {

Scenario thirty_six(double overhead = 0.0) {
    ScenarioBuilder b("36");
    const std::vector<std::pair<std::string, int>> layout{{"A-4G", 10}, {"B-4G", 12}, {"C-4G", 8}, {"D-4G", 6}};
    for (const auto& [n, k] : layout) {
        b.network(n, n.substr(0, 1));
        for (int i = 0; i < k; ++i) {
            if (n == "A-4G")
                b.cell_trace(n + std::to_string(i), n, {{0.0, -90.0}, {5.0, -90.0}, {5.5, -150.0}});
            else
                b.cell(n + std::to_string(i), n, -95.0 + i);
        }
    }
    b.initial("A-4G").horizon(60).overhead(overhead);
    return b.build();
}

CellularEvent oos() { return {0.0, OutOfServicePayload{"T-4G", "service floor"}}; }

}  // namespace

TEST(BaselineTrigger, WeakButInServiceDoesNotTrigger) {
    DeviceState d;
    d.registered = "T-4G";
    EXPECT_FALSE(baseline_trigger(d, {0.0, RadioMeasPayload{"t1", -130.0}}));
    EXPECT_FALSE(baseline_trigger(d, {0.0, RadioMeasPayload{"t1", -80.0}}));
    EXPECT_TRUE(baseline_trigger(d, oos()));
}

TEST(ExhaustiveScan, ThirtySixCellsTake14_4s) {
    const auto sc = thirty_six();
    const auto r = exhaustive_scan(sc, 0.0);
    EXPECT_EQ(r.cells_scanned, 36);
    EXPECT_NEAR(r.elapsed, 14.4, 1e-9);
}

TEST(ExhaustiveScan, SingleCell) {
    const auto sc = ScenarioBuilder().network("T-4G", "T").cell("t1", "T-4G", -90, 0.7).build();
    EXPECT_DOUBLE_EQ(exhaustive_scan(sc, 0.0).elapsed, 0.7);
}

TEST(ExhaustiveScan, UnavailableCellsStillCostTime) {
    const auto sc = ScenarioBuilder()
                        .network("T-4G", "T")
                        .cell("t1", "T-4G", -150)
                        .cell("t2", "T-4G", -160)
                        .build();
    const auto r = exhaustive_scan(sc, 0.0);
    EXPECT_NEAR(r.elapsed, 0.8, 1e-12);
    ASSERT_EQ(r.networks.size(), 1u);
    for (const auto& e : r.networks[0].cells) EXPECT_FALSE(e.available());
}

TEST(PreferenceSelect, HeadOfListFallbackAndNone) {
    ScanResult scan;
    scan.networks = {{"T", {entry("t", -90.0)}}, {"S", {entry("s", -80.0)}}};
    EXPECT_EQ(preference_select(scan, {"T", "S"}), "T");
    scan.networks[0].cells[0].rss.reset();
    EXPECT_EQ(preference_select(scan, {"T", "S"}), "S");
    scan.networks[1].cells[0].rss.reset();
    EXPECT_FALSE(preference_select(scan, {"T", "S"}));
}

TEST(HardSwitch, ExhaustiveScanPlusAttachIs17s) {
    auto sc = std::make_shared<const Scenario>(thirty_six());
    Engine e(sc);
    LegacySelection legacy;
    e.add_observer(std::ref(legacy));
    e.start();
    e.run();
    ASSERT_EQ(e.switch_log().size(), 1u);
    const auto& s = e.switch_log()[0];
    EXPECT_EQ(s.kind, SwitchKind::kBaseline);
    EXPECT_EQ(s.to, "B-4G");
    EXPECT_NEAR(s.disruption(), 17.0, 1e-9);
}

TEST(HardSwitch, SingleNetworkIs3s) {
    auto sc = ScenarioBuilder().network("T-4G", "T").cell("t1", "T-4G", -90).horizon(20).shared();
    Engine e(sc);
    e.start();
    const auto t = hard_switch(e, exhaustive_scan(*sc, 0.0), {"T-4G"});
    EXPECT_NEAR(t.t_switch(), 3.0, 1e-12);
    e.run();
    EXPECT_EQ(e.state().registered, "T-4G");
}

TEST(HardSwitch, FailedAttachMovesToNextCandidate) {
    ScenarioBuilder b("fail");
    b.network("T-4G", "T").network("S-4G", "S").cell("t1", "T-4G", -90).cell("s1", "S-4G", -90).horizon(30);
    b.raw().attach_failure_probability = 1.0;
    auto sc = b.shared();
    Engine e(sc);
    e.start();
    const auto t = hard_switch(e, exhaustive_scan(*sc, 0.0), {"T-4G", "S-4G"});
    EXPECT_FALSE(t.target);
    EXPECT_NEAR(t.t_switch(), 0.8 + 2 * 2.6, 1e-12);  // both attaches are paid for
    e.run_until(7.0);
    ASSERT_FALSE(e.switch_log().empty());
    EXPECT_EQ(e.switch_log()[0].attempts, 2);
}

TEST(HardSwitch, SeededFailuresAreReproducible) {
    ScenarioBuilder b("half");
    b.network("T-4G", "T").network("S-4G", "S").cell("t1", "T-4G", -90).cell("s1", "S-4G", -90).horizon(30).seed(11);
    b.raw().attach_failure_probability = 0.5;
    auto sc = b.shared();
    auto attempts = [&] {
        std::vector<int> out;
        Engine e(sc);
        for (int i = 0; i < 8; ++i) {
            const auto s = hard_switch(e, exhaustive_scan(*sc, e.now()), {"T-4G", "S-4G"});
            out.push_back(s.target ? 1 : 0);
            e.run_until(e.now() + 10.0);
            if (e.now() >= 29.0) break;
        }
        return out;
    };
    EXPECT_EQ(attempts(), attempts());
}

TEST(DirectSwitch, OneTargetCellIs3s) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("S-4G", "S")
                  .cell("t1", "T-4G", -110)
                  .cell("s1", "S-4G", -80)
                  .initial("T-4G")
                  .horizon(20)
                  .shared();
    Engine e(sc);
    e.start();
    e.run_until(1.0);
    ScanResult scan;
    scan.networks = {{"S-4G", {entry("s1", -80.0)}}};
    const auto t = direct_switch(e, scan, "S-4G");
    EXPECT_EQ(t.n_t, 1);
    EXPECT_NEAR(t.t_switch(), 3.0, 1e-12);
    e.run();
    EXPECT_NEAR(e.switch_log().at(0).disruption(), 3.0, 1e-9);
}

TEST(DirectSwitch, OverheadGives10_3s) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("S-4G", "S")
                  .cell("t1", "T-4G", -110)
                  .cell("s1", "S-4G", -80)
                  .initial("T-4G")
                  .overhead(7.3)
                  .horizon(20)
                  .shared();
    Engine e(sc);
    e.start();
    e.run_until(1.0);
    ScanResult scan;
    scan.networks = {{"S-4G", {entry("s1", -80.0)}}};
    EXPECT_NEAR(direct_switch(e, scan, "S-4G").t_switch(), 10.3, 1e-12);
}

TEST(DirectSwitch, TargetNotScannedLeavesDeviceAlone) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("S-4G", "S")
                  .cell("t1", "T-4G", -110)
                  .cell("s1", "S-4G", -80)
                  .initial("T-4G")
                  .horizon(20)
                  .shared();
    Engine e(sc);
    e.start();
    e.run_until(1.0);
    try {
        direct_switch(e, ScanResult{}, "S-4G");
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::TargetNotScanned);
    }
    EXPECT_EQ(e.state().registered, "T-4G");
    EXPECT_FALSE(e.switch_in_progress());
}

TEST(LegacySelection, FallsBackWithinCarrierBeforeScanning) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("T-3G", "T", Rat::k3G)
                  .network("S-4G", "S")
                  .cell_trace("t4", "T-4G", {{0.0, -100.0}, {10.0, -100.0}, {11.0, -160.0}})
                  .cell("t3", "T-3G", -105)
                  .cell("s4", "S-4G", -75)
                  .initial("T-4G")
                  .horizon(30)
                  .shared();
    Engine::Options opt;
    opt.network_reselection = false;
    Engine e(sc, opt);
    LegacySelection legacy;
    e.add_observer(std::ref(legacy));
    e.start();
    e.run();
    EXPECT_EQ(e.state().registered, "T-3G");
    ASSERT_EQ(e.switch_log().size(), 1u);
    EXPECT_EQ(e.switch_log()[0].kind, SwitchKind::kIntraRat);
    EXPECT_TRUE(legacy.scans().empty());
}
