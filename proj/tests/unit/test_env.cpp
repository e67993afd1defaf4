#include <gtest/gtest.h>

#include "builders.hpp"
#include "mca/sim/drx.hpp"
#include "mca/sim/engine.hpp"
#include "mca/sim/mobility.hpp"

using namespace mca;
using mca::testing::ScenarioBuilder;

namespace {

SibConfig cycle(double period, double on) {
    SibConfig s;
    s.paging_cycle = period;
    s.on_duration = on;
    return s;
}

std::size_t count_kind(const std::vector<CellularEvent>& evs, EventKind k) {
    std::size_t n = 0;
    for (const auto& e : evs) n += e.kind() == k;
    return n;
}

}  // namespace

// --- DRX ---------------------------------------------------------------------

TEST(Drx, SleepWindowFromCycleStart) {
    const auto w = paging_schedule(cycle(1.0, 0.1), 0.0);
    EXPECT_NEAR(w.start, 0.1, 1e-12);
    EXPECT_NEAR(w.end, 1.0, 1e-12);
}

TEST(Drx, SleepWindowTruncatedInsideSleep) {
    const auto w = paging_schedule(cycle(1.0, 0.1), 0.5);
    EXPECT_NEAR(w.start, 0.5, 1e-12);
    EXPECT_NEAR(w.end, 1.0, 1e-12);
}

TEST(Drx, CycleBoundaryIsAwakeFirst) {
    const auto w = paging_schedule(cycle(1.0, 0.1), 1.0);
    EXPECT_NEAR(w.start, 1.1, 1e-12);
    EXPECT_NEAR(w.end, 2.0, 1e-12);
    EXPECT_TRUE(in_on_duration(cycle(1.0, 0.1), 1.0));
    EXPECT_FALSE(in_on_duration(cycle(1.0, 0.1), 1.5));
    EXPECT_DOUBLE_EQ(next_cycle_start(cycle(1.28, 0.1), 1.3), 2.56);
}

// --- Attach ------------------------------------------------------------------

TEST(Attach, DurationIsAttachTime) {
    auto sc = ScenarioBuilder().network("T-4G", "T").cell("t1", "T-4G", -90).horizon(20).shared();
    Engine e(sc);
    e.start();
    const auto s = e.attach("t1");
    EXPECT_DOUBLE_EQ(s.t_end - e.now(), 2.6);
    e.run();
    EXPECT_EQ(e.state().registered, "T-4G");
}

TEST(Attach, PlatformOverheadAdds) {
    auto sc = ScenarioBuilder().network("T-4G", "T").cell("t1", "T-4G", -90).overhead(7.3).horizon(20).shared();
    Engine e(sc);
    const auto s = e.attach("t1");
    EXPECT_NEAR(s.t_end, 9.9, 1e-12);
}

TEST(Attach, BarredCellIsRejectedWithoutStateChange) {
    SibConfig barred;
    barred.barred = true;
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("S-4G", "S")
                  .cell("t1", "T-4G", -90)
                  .cell("s1", "S-4G", -80, 0.4, 2.6, barred)
                  .initial("T-4G")
                  .horizon(20)
                  .shared();
    Engine e(sc);
    e.start();
    e.run_until(1.0);
    const auto before = e.event_log().size();
    try {
        e.attach("s1");
        FAIL() << "expected CELL_BARRED";
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::CellBarred);
    }
    EXPECT_EQ(e.state().registered, "T-4G");
    EXPECT_FALSE(e.switch_in_progress());
    EXPECT_EQ(e.event_log().size(), before);
}

// --- Reselection -------------------------------------------------------------

TEST(Reselection, WeakServingMovesToSameCarrier3G) {
    CellMeasurement serving{"t4", "T-4G", "T", -125.0, 0, -120.0, false, true};
    CellMeasurement cand{"t3", "T-3G", "T", -95.0, 0, -120.0, false, true};
    const auto d = network_reselection(serving, {cand});
    EXPECT_TRUE(d.move);
    EXPECT_EQ(d.network, "T-3G");
}

TEST(Reselection, StrongServingStays) {
    CellMeasurement serving{"t4", "T-4G", "T", -90.0, 0, -120.0, false, true};
    CellMeasurement cand{"t3", "T-3G", "T", -80.0, 0, -120.0, false, true};
    EXPECT_FALSE(network_reselection(serving, {cand}).move);
}

TEST(Reselection, OtherCarrierIsNeverATarget) {
    CellMeasurement serving{"t4", "T-4G", "T", -125.0, 0, -120.0, false, true};
    CellMeasurement cand{"s4", "S-4G", "S", -70.0, 0, -120.0, false, true};
    EXPECT_FALSE(network_reselection(serving, {cand}).move);
}

TEST(Reselection, PriorityThenRssThenId) {
    CellMeasurement serving{"t4", "T-4G", "T", -125.0, 0, -120.0, false, true};
    std::vector<CellMeasurement> cands{{"b", "T-3G", "T", -80.0, 1, -120.0, false, true},
                                       {"a", "T-3G", "T", -80.0, 1, -120.0, false, true},
                                       {"c", "T-2", "T", -70.0, 0, -120.0, false, true}};
    EXPECT_EQ(network_reselection(serving, cands).cell, "a");
}

TEST(Reselection, NoCandidateMeansOutOfServiceAtFloorCrossing) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .cell_trace("t1", "T-4G", {{0.0, -125.0}, {10.0, -125.0}, {20.0, -145.0}})
                  .initial("T-4G")
                  .horizon(30)
                  .shared();
    Engine e(sc);
    e.start();
    e.run();
    std::vector<CellularEvent> oos;
    for (const auto& ev : e.event_log())
        if (ev.kind() == EventKind::kOutOfService) oos.push_back(ev);
    ASSERT_EQ(oos.size(), 1u);
    EXPECT_NEAR(oos[0].time, 17.5, 1e-9);
    EXPECT_EQ(std::get<OutOfServicePayload>(oos[0].payload).network, "T-4G");
    EXPECT_FALSE(e.state().registered);
}

// --- Stepping ----------------------------------------------------------------

TEST(Step, PagingOccasionEmitsOnePagingEvent) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .cell("t1", "T-4G", -90)
                  .initial("T-4G")
                  .flow(0.0, Direction::kUplink, 0.5)
                  .horizon(5)
                  .shared();
    Engine e(sc);
    e.start();
    e.run_until(0.0);
    EXPECT_EQ(e.state().rrc_mode, RrcMode::kAwake);
    e.run_until(0.99);
    // Other events may share t = 1.0; step until the paging occasion appears.
    std::vector<CellularEvent> out;
    while (count_kind(out, EventKind::kPaging) == 0 && !e.idle()) {
        auto more = e.step();
        out.insert(out.end(), more.begin(), more.end());
    }
    EXPECT_DOUBLE_EQ(e.now(), 1.0);
    ASSERT_EQ(count_kind(out, EventKind::kPaging), 1u);
    EXPECT_FALSE(std::get<PagingPayload>(out.back().payload).data_pending);
    EXPECT_EQ(e.state().rrc_mode, RrcMode::kSleep);
}

TEST(Step, ClockRegressionIsRejected) {
    auto sc = ScenarioBuilder().network("T-4G", "T").cell("t1", "T-4G", -90).initial("T-4G").horizon(5).shared();
    Engine e(sc);
    e.start();
    e.run_until(2.0);
    try {
        e.step(SimEvent{1.0, sim::MeasurementTick{}});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::ClockRegression);
    }
}

TEST(Step, EqualTimesRunInInsertionOrderAndRerunIsIdentical) {
    auto run = [] {
        auto sc = ScenarioBuilder().network("T-4G", "T").cell("t1", "T-4G", -90).horizon(5).shared();
        Engine e(sc);
        std::vector<int> order;
        for (int i = 0; i < 5; ++i) e.schedule_callback(1.0, [&order, i](Engine&) { order.push_back(i); });
        e.start();
        e.run();
        std::string log;
        for (const auto& ev : e.event_log()) log += to_json(ev).dump() + "\n";
        return std::make_pair(order, log);
    };
    const auto a = run();
    EXPECT_EQ(a.first, (std::vector<int>{0, 1, 2, 3, 4}));
    EXPECT_EQ(a, run());
}

// --- Delivery ----------------------------------------------------------------

namespace {
DeviceTimeline always_on(std::vector<Interval> off = {}) {
    DeviceTimeline tl;
    tl.serving = {{{0.0, std::numeric_limits<double>::infinity()}, cycle(1.0, 0.1)}};
    tl.off_frequency = std::move(off);
    tl.horizon = 100.0;
    return tl;
}
}  // namespace

TEST(Delivery, OnFrequencyFlowIsDelivered) {
    const auto r = deliver_traffic({{0.5, Direction::kDownlink, 1.0}}, always_on());
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].status, DeliveryStatus::kDelivered);
    EXPECT_DOUBLE_EQ(*r[0].delivered_at, 1.0);  // paged at the next cycle start
}

TEST(Delivery, OffFrequencyAtPagingDelaysByRemainder) {
    const auto r = deliver_traffic({{2.0, Direction::kDownlink, 1.0}}, always_on({{1.9, 2.4}}));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].status, DeliveryStatus::kDelayed);
    EXPECT_NEAR(r[0].delay, 0.4, 1e-12);
}

TEST(Delivery, NeverBackIsLost) {
    DeviceTimeline tl = always_on();
    tl.serving[0].span.end = 1.5;
    const auto r = deliver_traffic({{2.0, Direction::kDownlink, 1.0}}, tl);
    EXPECT_EQ(r[0].status, DeliveryStatus::kLost);
}

TEST(Delivery, AfterSwitchCompletesIsDelivered) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("S-4G", "S")
                  .cell("t1", "T-4G", -90)
                  .cell("s1", "S-4G", -80)
                  .initial("T-4G")
                  .flow(10.0, Direction::kDownlink, 1.0)
                  .horizon(20)
                  .shared();
    Engine e(sc);
    e.start();
    e.schedule_callback(2.0, [](Engine& eng) { eng.attach("s1"); });
    e.run();
    EXPECT_EQ(e.state().registered, "S-4G");
    const auto d = e.deliveries();
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].status, DeliveryStatus::kDelivered);
}

TEST(Delivery, FlowDuringSwitchIsDelayed) {
    auto sc = ScenarioBuilder()
                  .network("T-4G", "T")
                  .network("S-4G", "S")
                  .cell("t1", "T-4G", -90)
                  .cell("s1", "S-4G", -80)
                  .initial("T-4G")
                  .flow(3.0, Direction::kDownlink, 1.0)
                  .horizon(20)
                  .shared();
    Engine e(sc);
    e.start();
    e.schedule_callback(2.0, [](Engine& eng) { eng.attach("s1"); });
    e.run();
    const auto d = e.deliveries();
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].status, DeliveryStatus::kDelayed);
    EXPECT_NEAR(*d[0].delivered_at, 4.6, 1e-9);
    EXPECT_NEAR(e.unregistered_time(), 2.6, 1e-9);
}
