#include "ltev/metrics.h"

#include "doctest.h"

using namespace ltev;

namespace
{

LayerCrossing
Crossing(double delay, int payloadBytes = 72)
{
    TaggedPacket p;
    p.payload_bytes = payloadBytes;
    p.header_bytes = {0, 8, 20, 2, 1, 2};
    p.tags.fill(0);
    const auto t = static_cast<TimeMs>(delay);
    return RxChain(p, 1, t, 8 * 105);
}

} // namespace

TEST_CASE("level requirements")
{
    const auto l1 = Requirement(AutomationLevel::L1_L2);
    CHECK(l1.min_reliability == 0.90);
    CHECK(l1.max_latency_ms == 25.0);
    CHECK(l1.min_length == 5);
    const auto l3 = Requirement(AutomationLevel::L3_L5);
    CHECK(l3.min_reliability == 0.9999);
    CHECK(l3.max_latency_ms == 10.0);
    CHECK(l3.min_length == 5);
    CHECK(ToString(AutomationLevel::L1_L2) == "L1_L2");
}

TEST_CASE("pdr")
{
    MetricsStore s(3, 45000, "id", 1);
    s.AddTransmitted(2, 2250);
    for (int i = 0; i < 2250; ++i)
    {
        s.RecordDelivery(2, 1, i, Crossing(1));
    }
    CHECK(Pdr(s, 2) == 1.0);

    MetricsStore t(3, 1000, "id", 1);
    t.AddTransmitted(3, 10);
    for (int i = 0; i < 9; ++i)
    {
        t.RecordDelivery(3, 1, i, Crossing(i < 4 ? 5 : 30));
    }
    CHECK(Pdr(t, 3) == doctest::Approx(0.9));
    CHECK(PdrWithin(t, 3, 25.0) == doctest::Approx(0.4));
    CHECK(t.Receiver(3).rx_count <= t.Receiver(3).tx_count);

    MetricsStore z(3, 1000, "id", 1);
    z.AddTransmitted(2, 0);
    CHECK_THROWS_AS(Pdr(z, 2), std::domain_error);
    CHECK_THROWS_AS(Pdr(z, 3), std::out_of_range);
    CHECK_THROWS_AS(z.AddTransmitted(4), std::out_of_range);
}

TEST_CASE("platoon length from follower PDRs")
{
    CHECK(PlatoonLengthFromPdrs({0.95, 0.93, 0.91, 0.90, 0.85, 0.92, 0.80, 0.75}, 0.90) == 5);
    CHECK(PlatoonLengthFromPdrs(std::vector<double>(8, 1.0), 0.90) == 9);
    CHECK(PlatoonLengthFromPdrs(std::vector<double>(8, 0.5), 0.90) == 1);
    CHECK(PlatoonLengthFromPdrs({}, 0.90) == 1);
}

TEST_CASE("platoon length gates every packet on latency")
{
    MetricsStore s(4, 1000, "id", 1);
    for (int v = 2; v <= 4; ++v)
    {
        s.AddTransmitted(v, 100);
    }
    // V2 perfect and fast; V3 complete but 15 of 100 packets take 20 ms; V4 perfect
    for (int i = 0; i < 100; ++i)
    {
        s.RecordDelivery(2, 1, i, Crossing(3));
        s.RecordDelivery(3, 1, i, Crossing(i < 15 ? 20 : 3));
        s.RecordDelivery(4, 1, i, Crossing(3));
    }
    CHECK(PlatoonLength(s, Requirement(AutomationLevel::L1_L2)) == 4);
    CHECK(PlatoonLength(s, Requirement(AutomationLevel::L3_L5)) == 2);

    // monotone in both knobs
    for (double lat : {1.0, 5.0, 10.0, 20.0, 50.0})
    {
        int prev = 100;
        for (double rel : {0.5, 0.8, 0.85, 0.9, 0.99})
        {
            const int len = PlatoonLength(s, {AutomationLevel::L1_L2, rel, lat, 5});
            CHECK(len <= prev);
            prev = len;
            CHECK(PlatoonLength(s, {AutomationLevel::L1_L2, rel, lat + 10, 5}) >= len);
        }
    }
}

TEST_CASE("layer profile")
{
    MetricsStore s(2, 45000, "id", 1);
    s.AddTransmitted(2, 2250);
    for (int i = 0; i < 2250; ++i)
    {
        s.RecordMac(2, 1.0, 8 * 105);
        s.RecordDelivery(2, 1, i, Crossing(1));
    }
    const auto prof = LayerProfile(s, 2);
    REQUIRE(prof.size() == 6);
    CHECK(prof[0].layer == Layer::APP);
    CHECK(prof[0].throughput_kbps == doctest::Approx(28.8));
    CHECK(prof[2].layer == Layer::NETWORK);
    CHECK(prof[2].throughput_kbps == doctest::Approx(40.0));
    for (const auto& l : prof)
    {
        CHECK(l.mean_delay_ms == 1.0);
        CHECK(l.p95_delay_ms == 1.0);
    }
    for (std::size_t k = 1; k < prof.size(); ++k)
    {
        CHECK(prof[k].throughput_kbps >= prof[k - 1].throughput_kbps);
    }

    MetricsStore empty(2, 45000, "id", 1);
    empty.AddTransmitted(2, 5);
    CHECK(LayerProfile(empty, 2).empty());
    CHECK(LayerProfile(empty, 1).empty());
}

TEST_CASE("nearest-rank percentile")
{
    CHECK(Percentile({5, 1, 4, 2, 3}, 95) == 5);
    CHECK(Percentile({5, 1, 4, 2, 3}, 20) == 1);
    CHECK(Percentile({5, 1, 4, 2, 3}, 40) == 2);
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i)
    {
        v.push_back(i);
    }
    CHECK(Percentile(v, 95) == 95);
    CHECK_THROWS_AS(Percentile({}, 95), std::invalid_argument);
}
