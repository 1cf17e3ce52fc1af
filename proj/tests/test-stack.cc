#include "ltev/stack.h"

#include "doctest.h"

using namespace ltev;

namespace
{

TaggedPacket
Pdu(int sn, TimeMs t = 0)
{
    TaggedPacket p;
    p.payload_bytes = 72;
    p.rlc_sn = sn;
    p.app_seq = static_cast<std::uint64_t>(sn);
    p.tags.fill(t);
    return p;
}

std::vector<int>
Sns(const std::vector<RlcDelivery>& d)
{
    std::vector<int> out;
    for (const auto& x : d)
    {
        out.push_back(x.packet.rlc_sn);
    }
    return out;
}

} // namespace

TEST_CASE("app send stamps T1 and numbers packets")
{
    AppSource app(1);
    const auto a = app.Send(72, 100);
    const auto b = app.Send(20, 100);
    CHECK(a.Tag(Layer::APP) == 100);
    CHECK(a.payload_bytes == 72);
    CHECK(b.payload_bytes == 20);
    CHECK(b.app_seq == a.app_seq + 1);
    CHECK(a.dst == kBroadcast);
    CHECK_THROWS_AS(app.Send(0, 0), std::invalid_argument);
}

TEST_CASE("encapsulation sizes and tags")
{
    AppSource app(1);
    auto p = app.Send(72, 40);
    const HeaderSizes h;
    CHECK(h.Total() == 33);
    Encapsulate(Layer::TRANSPORT, p, 40, h);
    Encapsulate(Layer::NETWORK, p, 40, h);
    Encapsulate(Layer::PDCP, p, 40, h);
    Encapsulate(Layer::RLC, p, 40, h);
    Encapsulate(Layer::MAC, p, 47, h);
    CHECK(p.SizeBytesAt(Layer::APP) == 72);
    CHECK(p.SizeBytesAt(Layer::TRANSPORT) == 80);
    CHECK(p.SizeBytesAt(Layer::NETWORK) == 100);
    CHECK(p.SizeBytesAt(Layer::PDCP) == 102);
    CHECK(p.SizeBytesAt(Layer::RLC) == 103);
    CHECK(p.SizeBytesAt(Layer::MAC) == 105);
    for (Layer l : {Layer::APP, Layer::TRANSPORT, Layer::NETWORK, Layer::PDCP, Layer::RLC})
    {
        CHECK(p.Tag(l) == 40);
    }
    CHECK(p.Tag(Layer::MAC) == 47);
    CHECK_THROWS_AS(Encapsulate(Layer::APP, p, 40, h), std::invalid_argument);
}

TEST_CASE("layer names round trip")
{
    for (Layer l : kLayers)
    {
        CHECK(LayerFromName(LayerName(l)) == l);
    }
    CHECK_FALSE(LayerFromName("phy").has_value());
}

TEST_CASE("RLC sequence number wraps after 32 PDUs")
{
    RlcUmTx tx;
    TaggedPacket p;
    for (int i = 0; i < 32; ++i)
    {
        tx.Assign(p);
        CHECK(p.rlc_sn == i);
    }
    tx.Assign(p);
    CHECK(p.rlc_sn == 0);
}

TEST_CASE("in-order PDUs pass straight through")
{
    RlcUmRx rx(25);
    for (int sn = 0; sn < 3; ++sn)
    {
        const auto d = rx.Receive(Pdu(sn), 10 + sn);
        REQUIRE(d.size() == 1);
        CHECK(d[0].packet.rlc_sn == sn);
        CHECK(d[0].time_ms == 10 + sn);
    }
    CHECK_FALSE(rx.TimerDeadline().has_value());
}

TEST_CASE("lost SN stalls its successor for exactly t-Reordering")
{
    RlcUmRx rx(25);
    CHECK(Sns(rx.Receive(Pdu(0), 80)) == std::vector<int>{0});
    CHECK(rx.Receive(Pdu(2), 100).empty());
    REQUIRE(rx.TimerDeadline() == 125);
    CHECK(rx.OnTimer(124).empty());
    const auto d = rx.OnTimer(125);
    CHECK(Sns(d) == std::vector<int>{2});
    CHECK(d[0].time_ms == 125);
    CHECK(rx.LostCount() == 1);
    CHECK(rx.ExpectedSn() == 3);
    CHECK_FALSE(rx.TimerDeadline().has_value());
}

TEST_CASE("gap filled before expiry releases both and cancels the timer")
{
    RlcUmRx rx(25);
    rx.Receive(Pdu(0), 90);
    rx.Receive(Pdu(2), 100);
    const auto gen = rx.TimerGeneration();
    const auto d = rx.Receive(Pdu(1), 110);
    CHECK(Sns(d) == std::vector<int>{1, 2});
    CHECK(d[0].time_ms == 110);
    CHECK(d[1].time_ms == 110);
    CHECK_FALSE(rx.TimerDeadline().has_value());
    CHECK(rx.TimerGeneration() != gen);
    CHECK(rx.OnTimer(125).empty());
    CHECK(rx.LostCount() == 0);
}

TEST_CASE("duplicates are discarded")
{
    RlcUmRx rx(25);
    rx.Receive(Pdu(0), 1);
    CHECK(rx.Receive(Pdu(0), 2).empty());
    rx.Receive(Pdu(3), 3);
    CHECK(rx.Receive(Pdu(3), 4).empty());
    CHECK(rx.DiscardedCount() == 2);
}

TEST_CASE("timer restarts for a second gap")
{
    RlcUmRx rx(25);
    rx.Receive(Pdu(0), 0);
    rx.Receive(Pdu(2), 10);
    rx.Receive(Pdu(4), 20);
    // expiry at 35 gives up SN 1, releases 2, and re-arms for SN 3
    CHECK(Sns(rx.OnTimer(35)) == std::vector<int>{2});
    REQUIRE(rx.TimerDeadline() == 60);
    CHECK(Sns(rx.OnTimer(60)) == std::vector<int>{4});
    CHECK(rx.LostCount() == 2);
}

TEST_CASE("long in-order stream across many wraps")
{
    RlcUmRx rx(25);
    RlcUmTx tx;
    std::uint64_t delivered = 0;
    for (int i = 0; i < 1000; ++i)
    {
        TaggedPacket p = Pdu(0, i);
        tx.Assign(p);
        if (i % 7 == 3)
        {
            continue; // dropped on air
        }
        for (const auto& d : rx.Receive(p, i * 20))
        {
            (void)d;
            ++delivered;
        }
        if (rx.TimerDeadline() && *rx.TimerDeadline() <= i * 20 + 19)
        {
            delivered += rx.OnTimer(*rx.TimerDeadline()).size();
        }
    }
    CHECK(delivered == 1000 - 143);
    CHECK(rx.LostCount() == 143);
}

TEST_CASE("receive chain delays")
{
    TaggedPacket p = Pdu(0, 200);
    p.header_bytes = {0, 8, 20, 2, 1, 2};
    const auto same = RxChain(p, 201, 201, 840);
    for (int k = 0; k < kLayerCount; ++k)
    {
        CHECK(same.delay_ms[k] == 1.0);
    }
    CHECK(same.bits[static_cast<int>(Layer::APP)] == 576);
    CHECK(same.bits[static_cast<int>(Layer::NETWORK)] == 800);
    CHECK(same.bits[static_cast<int>(Layer::MAC)] == 840);

    const auto stalled = RxChain(p, 201, 226, 840);
    for (Layer l : {Layer::APP, Layer::TRANSPORT, Layer::NETWORK, Layer::PDCP, Layer::RLC})
    {
        CHECK(stalled.delay_ms[static_cast<int>(l)] == 26.0);
    }
    CHECK(stalled.delay_ms[static_cast<int>(Layer::MAC)] == 1.0);
}
