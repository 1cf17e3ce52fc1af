#include "ltev/channel.h"
#include "ltev/mac-sps.h"

#include "sps-oracle.h"

#include "doctest.h"

#include <array>

using namespace ltev;

namespace
{

SenseParams
Single(int period = 20)
{
    SenseParams p;
    p.needed_subchannels = 1;
    p.period_ms = period;
    return p;
}

} // namespace

TEST_CASE("empty history: every candidate ties, earliest 20% win")
{
    SensingHistory h(4, 1000);
    const auto out = Sense(h, {101, 120}, Single());
    // 20 subframes x 4 subchannels = 80 candidates, keep 16
    REQUIRE(out.size() == 16);
    for (int i = 0; i < 16; ++i)
    {
        CHECK(out[i] == Candidate{101 + i / 4, i % 4});
    }
    CHECK_THROWS_AS(Sense(h, {120, 110}, Single()), std::invalid_argument);
}

TEST_CASE("ten candidates, two excluded, lowest two RSSI of the rest")
{
    // 10 subframes x 1 subchannel, period 10: candidate y is ranked by the sample at y-10
    SensingHistory h(1, 1000);
    const std::array<double, 10> rssi = {-90, -100, -95, -60, -105, -70, -99, -80, -85, -75};
    for (int k = 0; k < 10; ++k)
    {
        h.RecordRssi(91 + k, {rssi[k]});
    }
    // reservations seen at 91+k with period 10 project onto 101+k
    h.AddReservation({5, 95, 0, 1, 10, -90.0}); // excludes 105 (rssi -105)
    h.AddReservation({6, 92, 0, 1, 10, -100.0}); // excludes 102 (rssi -100)
    h.AddReservation({7, 97, 0, 1, 10, -115.0}); // below threshold, keeps 107
    const auto out = Sense(h, {101, 110}, Single(10));
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Candidate{107, 0}); // -99
    CHECK(out[1] == Candidate{103, 0}); // -95
}

TEST_CASE("threshold relaxes in 3 dB steps until 20% survive")
{
    SensingHistory h(1, 1000);
    // five candidates 101..105, all reserved; RSRP -104, -106, -101, -109, -107
    const std::array<double, 5> rsrp = {-104, -106, -101, -109, -107};
    for (int k = 0; k < 5; ++k)
    {
        h.AddReservation({k + 2, 81 + k, 0, 1, 20, rsrp[k]});
    }
    // -110 excludes all; at -107 only the -109 reservation survives
    const auto out = Sense(h, {101, 105}, Single());
    REQUIRE(out.size() == 1);
    CHECK(out[0] == Candidate{104, 0});

    // pool of 10, target 2: -107 leaves one, -104 leaves 102, 104, 105; unsampled ties go earliest first
    SensingHistory h2(1, 1000);
    for (int k = 0; k < 5; ++k)
    {
        h2.AddReservation({k + 2, 81 + k, 0, 1, 20, rsrp[k]});
        h2.AddReservation({k + 2, 86 + k, 0, 1, 20, -50.0});
    }
    const auto out2 = Sense(h2, {101, 110}, Single());
    REQUIRE(out2.size() == 2);
    CHECK(out2[0] == Candidate{102, 0});
    CHECK(out2[1] == Candidate{104, 0});
}

TEST_CASE("own transmissions count as the window average")
{
    SensingHistory h(2, 1000);
    h.RecordRssi(60, {-100.0, -80.0});
    h.RecordUnsensed(80);
    h.RecordRssi(81, {-90.0, -90.0});
    const auto mean = h.MeanRssiMw(100, 0, 1, 20);
    REQUIRE(mean.has_value());
    // samples at 80 (unsensed -> window average of subchannel 0) and 60
    const double avg0 = (DbmToMw(-100.0) + DbmToMw(-90.0)) / 2;
    CHECK(*mean == doctest::Approx((avg0 + DbmToMw(-100.0)) / 2));
    CHECK_FALSE(h.MeanRssiMw(99, 0, 1, 20).has_value());
}

TEST_CASE("eviction drops records older than the window")
{
    SensingHistory h(1, 1000);
    h.RecordRssi(0, {-90.0});
    h.RecordRssi(1, {-90.0});
    h.AddReservation({2, 0, 0, 1, 20, -50.0});
    h.AddReservation({2, 1, 0, 1, 20, -50.0});
    h.Evict(1000);
    CHECK(h.Rows().size() == 1);
    CHECK(h.Reservations().size() == 1);
    CHECK_THROWS_AS(h.RecordRssi(1, {-90.0}), std::logic_error);
}

TEST_CASE("sense agrees with the brute-force oracle")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const auto c = oracle::RandomCase(rng);
        const auto h = oracle::ToHistory(c.raw, 1000);
        const auto got = Sense(h, c.window, c.params);
        const auto want = oracle::BruteForceSense(c);
        REQUIRE(got == want);
    }
}

TEST_CASE("resource selection statistics")
{
    RngStream rng(99);
    const std::vector<Candidate> one{{150, 2}};
    CHECK(SelectResource(one, rng).candidate == Candidate{150, 2});
    CHECK_THROWS_AS(SelectResource({}, rng), std::invalid_argument);

    const std::vector<Candidate> two{{101, 0}, {102, 1}};
    int first = 0;
    std::array<int, 16> counters{};
    for (int i = 0; i < 10000; ++i)
    {
        const auto sel = SelectResource(two, rng);
        first += sel.candidate == two[0] ? 1 : 0;
        REQUIRE(sel.reselection_counter >= 5);
        REQUIRE(sel.reselection_counter <= 15);
        ++counters[sel.reselection_counter];
    }
    CHECK(std::abs(first - 5000) <= 150);
    for (int k = 5; k <= 15; ++k)
    {
        CHECK(std::abs(counters[k] - 909) <= 90);
    }
}

TEST_CASE("SCI round trip and reservation projection")
{
    const Reservation r{140, 1, 2, 20};
    const Sci sci = BuildSci(3, r, 20);
    CHECK(sci.retransmission == false);
    DecodeParams det;
    const auto rec = DecodeSci(sci, 40.0, 140, -70.0, det);
    REQUIRE(rec.has_value());
    CHECK(rec->tx_id == 3);
    CHECK(rec->first_subchannel == 1);
    CHECK(rec->n_subchannels == 2);
    CHECK(rec->period_ms == 20);
    CHECK(rec->rx_subframe == 140);
    CHECK_FALSE(DecodeSci(sci, SinrThresholdDb(20) - 3.5, 140, -70.0, det).has_value());

    SensingHistory h(4, 1000);
    h.AddReservation(*rec);
    CHECK(h.ReservedRsrp(160, 1, 1) == -70.0);
    CHECK(h.ReservedRsrp(180, 2, 2) == -70.0);
    CHECK_FALSE(h.ReservedRsrp(160, 3, 1).has_value());
    CHECK_FALSE(h.ReservedRsrp(161, 1, 1).has_value());
    CHECK_FALSE(h.ReservedRsrp(140, 1, 1).has_value());
}

TEST_CASE("scheduler emits periodically and reselects when the counter expires")
{
    SpsScheduler::Params p;
    p.sense = Single();
    p.t1_ms = 1;
    p.t2_ms = 20;
    SpsScheduler sps(p, RngStream(5));
    SensingHistory h(4, 1000);

    CHECK(sps.OnPacketArrival(0, h));
    CHECK_FALSE(sps.OnPacketArrival(0, h));
    const auto r0 = *sps.Current();
    const int counter = sps.Counter();
    CHECK(r0.next_subframe >= 1);
    CHECK(r0.next_subframe <= 20);

    std::vector<TimeMs> emissions;
    for (TimeMs t = 0; t < 20 * 40 && sps.Current(); ++t)
    {
        if (sps.EmitsAt(t))
        {
            emissions.push_back(t);
            CHECK(sps.Current()->first_subchannel == r0.first_subchannel);
            sps.OnOccasion(t, true);
        }
    }
    REQUIRE(static_cast<int>(emissions.size()) == counter);
    for (std::size_t i = 1; i < emissions.size(); ++i)
    {
        CHECK(emissions[i] - emissions[i - 1] == 20);
    }
    CHECK_FALSE(sps.Current().has_value());
    CHECK(sps.OnPacketArrival(emissions.back() + 5, h));
    CHECK(sps.SelectionCount() == 2);
}

TEST_CASE("missed occasions do not consume the counter")
{
    SpsScheduler::Params p;
    p.sense = Single();
    SpsScheduler sps(p, RngStream(8));
    SensingHistory h(1, 1000);
    sps.OnPacketArrival(0, h);
    const int counter = sps.Counter();
    const TimeMs t0 = sps.Current()->next_subframe;
    sps.OnOccasion(t0, false);
    CHECK(sps.Counter() == counter);
    CHECK(sps.Current()->next_subframe == t0 + 20);
}

TEST_CASE("keep probability keeps the reservation")
{
    SpsScheduler::Params p;
    p.sense = Single();
    p.keep_probability = 0.8;
    SpsScheduler sps(p, RngStream(11));
    SensingHistory h(1, 1000);
    sps.OnPacketArrival(0, h);
    int kept = 0;
    int expiries = 0;
    for (TimeMs t = 0; t < 2000000 && expiries < 2000; ++t)
    {
        if (!sps.Current())
        {
            sps.OnPacketArrival(t, h);
            continue;
        }
        if (sps.EmitsAt(t))
        {
            const bool last = sps.Counter() == 1;
            sps.OnOccasion(t, true);
            if (last)
            {
                ++expiries;
                kept += sps.Current() ? 1 : 0;
            }
        }
    }
    CHECK(std::abs(static_cast<double>(kept) / expiries - 0.8) < 0.03);
}

TEST_CASE("candidates with no sample yet rank as the window average")
{
    // sensing began at 90: y in 101..109 has no sample at y-20, 110 has one at 90
    SensingHistory h(1, 1000);
    for (int t = 90; t <= 100; ++t)
    {
        h.RecordRssi(t, {t == 90 ? -80.0 : -110.0});
    }
    const auto out = Sense(h, {101, 110}, Single());
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Candidate{101, 0});
    CHECK(out[1] == Candidate{102, 0});

    // a quiet sample beats the window average
    SensingHistory q(1, 1000);
    for (int t = 90; t <= 100; ++t)
    {
        q.RecordRssi(t, {t == 90 ? -120.0 : -100.0});
    }
    const auto quiet = Sense(q, {101, 110}, Single());
    REQUIRE(quiet.size() == 2);
    CHECK(quiet[0] == Candidate{110, 0});
    CHECK(quiet[1] == Candidate{101, 0});
}
