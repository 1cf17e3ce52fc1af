#include "ltev/engine.h"
#include "ltev/simulation.h"

#include "doctest.h"

#include <vector>

using namespace ltev;

TEST_CASE("equal-time events fire in scheduling order")
{
    Engine e;
    std::vector<int> order;
    e.Schedule(100, EventKind::APP_ARRIVAL, {1, 0, 0});
    e.Schedule(100, EventKind::APP_ARRIVAL, {2, 0, 0});
    e.Schedule(50, EventKind::APP_ARRIVAL, {3, 0, 0});
    const auto fired = e.RunUntil(1000, [&](const Event& ev) { order.push_back(ev.payload.vehicle); });
    CHECK(fired == 3);
    CHECK(order == std::vector<int>{3, 1, 2});
}

TEST_CASE("schedule at now fires after already queued same-time events")
{
    Engine e;
    std::vector<int> order;
    e.Schedule(10, EventKind::APP_ARRIVAL, {1, 0, 0});
    e.Schedule(10, EventKind::APP_ARRIVAL, {2, 0, 0});
    e.RunUntil(20, [&](const Event& ev) {
        order.push_back(ev.payload.vehicle);
        if (ev.payload.vehicle == 1)
        {
            e.Schedule(e.Now(), EventKind::APP_ARRIVAL, {9, 0, 0});
        }
    });
    CHECK(order == std::vector<int>{1, 2, 9});
}

TEST_CASE("scheduling into the past is rejected")
{
    Engine e;
    e.Schedule(5, EventKind::SUBFRAME_TICK);
    e.RunUntil(5, [](const Event&) {});
    CHECK(e.Now() == 5);
    CHECK_THROWS_AS(e.Schedule(4, EventKind::SUBFRAME_TICK), std::logic_error);
    CHECK_NOTHROW(e.Schedule(5, EventKind::SUBFRAME_TICK));
}

TEST_CASE("events after t_end stay queued and time never goes backwards")
{
    Engine e;
    for (int t : {30, 10, 20, 40, 10})
    {
        e.Schedule(t, EventKind::SUBFRAME_TICK);
    }
    TimeMs last = -1;
    bool monotone = true;
    CHECK(e.RunUntil(30, [&](const Event& ev) {
        monotone = monotone && ev.time_ms >= last;
        last = ev.time_ms;
    }) == 4);
    CHECK(monotone);
    CHECK(e.Pending() == 1);
}

TEST_CASE("empty queue yields an empty store")
{
    Engine e;
    CHECK(e.RunUntil(45000, [](const Event&) {}) == 0);
    MetricsStore store;
    CHECK(store.Empty());
}

TEST_CASE("default scenario: 2250 leader arrivals and deterministic traces")
{
    const auto cfg = DefaultScenario();
    Simulation a(cfg);
    a.Run();
    CHECK(a.AppArrivals(1) == 2250);
    CHECK(a.AppArrivals(2) == 0);

    Simulation b(cfg);
    b.Run();
    CHECK(a.TraceDigest() == b.TraceDigest());
    CHECK(a.EventsFired() == b.EventsFired());
    for (int v : a.Metrics().Receivers())
    {
        const auto& ra = a.Metrics().Receiver(v);
        const auto& rb = b.Metrics().Receiver(v);
        CHECK(ra.rx_count == rb.rx_count);
        CHECK(ra.delays == rb.delays);
        CHECK(ra.bits == rb.bits);
    }

    auto other = cfg;
    other.seed = 2;
    Simulation c(other);
    c.Run();
    CHECK(c.TraceDigest() != a.TraceDigest());
}
