#include "ltev/stack.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ltev
{

std::string
LayerName(Layer l)
{
    switch (l)
    {
    case Layer::APP:
        return "app";
    case Layer::TRANSPORT:
        return "transport";
    case Layer::NETWORK:
        return "network";
    case Layer::PDCP:
        return "pdcp";
    case Layer::RLC:
        return "rlc";
    case Layer::MAC:
        return "mac";
    }
    return "?";
}

std::optional<Layer>
LayerFromName(const std::string& name)
{
    for (Layer l : kLayers)
    {
        if (LayerName(l) == name)
        {
            return l;
        }
    }
    return std::nullopt;
}

HeaderSizes
HeaderSizes::FromConfig(const ScenarioConfig& cfg)
{
    HeaderSizes h;
    h.bytes = {0,
               cfg.hdr_transport_bytes,
               cfg.hdr_network_bytes,
               cfg.hdr_pdcp_bytes,
               cfg.hdr_rlc_bytes,
               cfg.hdr_mac_bytes};
    return h;
}

int
HeaderSizes::Total() const
{
    return std::accumulate(bytes.begin(), bytes.end(), 0);
}

int
TaggedPacket::SizeBytesAt(Layer l) const
{
    int size = payload_bytes;
    for (int k = 1; k <= static_cast<int>(l); ++k)
    {
        size += header_bytes[k];
    }
    return size;
}

TaggedPacket
AppSource::Send(int payloadBytes, TimeMs t)
{
    if (payloadBytes < 1)
    {
        throw std::invalid_argument("application payload must be at least one byte");
    }
    TaggedPacket p;
    p.app_seq = m_nextSeq++;
    p.src = m_vehicle;
    p.dst = kBroadcast;
    p.payload_bytes = payloadBytes;
    p.tags.fill(t);
    return p;
}

void
Encapsulate(Layer layer, TaggedPacket& pkt, TimeMs t, const HeaderSizes& headers)
{
    if (layer == Layer::APP)
    {
        throw std::invalid_argument("APP is the source layer, nothing to encapsulate");
    }
    const int k = static_cast<int>(layer);
    pkt.header_bytes[k] = headers.bytes[k];
    pkt.tags[k] = t;
}

int
RlcUmRx::Offset(int sn) const
{
    const int base = m_uh - kRlcWindow;
    return ((sn - base) % kRlcSnModulus + kRlcSnModulus) % kRlcSnModulus;
}

bool
RlcUmRx::InWindow(int sn) const
{
    return Offset(sn) < kRlcWindow;
}

void
RlcUmRx::DeliverBelow(int sn, TimeMs t, std::vector<RlcDelivery>& out)
{
    // SNs below `sn` in window order; an empty buffer means nothing to do
    const int limit = Offset(sn);
    std::vector<std::pair<int, int>> ready;
    for (const auto& [s, pkt] : m_buffer)
    {
        if (Offset(s) < limit)
        {
            ready.emplace_back(Offset(s), s);
        }
    }
    std::sort(ready.begin(), ready.end());
    for (auto [off, s] : ready)
    {
        out.push_back(RlcDelivery{m_buffer.at(s), t});
        m_buffer.erase(s);
    }
}

int
RlcUmRx::FirstMissingFrom(int sn) const
{
    int s = sn;
    while (m_buffer.contains(s))
    {
        s = (s + 1) % kRlcSnModulus;
    }
    return s;
}

void
RlcUmRx::StartTimer(TimeMs t)
{
    m_ux = m_uh;
    m_deadline = t + m_tReordering;
    ++m_timerGeneration;
}

void
RlcUmRx::StopTimer()
{
    m_deadline.reset();
    ++m_timerGeneration;
}

std::vector<RlcDelivery>
RlcUmRx::Receive(const TaggedPacket& pdu, TimeMs t)
{
    std::vector<RlcDelivery> out;
    const int x = pdu.rlc_sn;
    if (x < 0 || x >= kRlcSnModulus)
    {
        throw std::invalid_argument("RLC PDU without a valid sequence number");
    }

    const bool betweenUrUh = Offset(x) > Offset(m_ur) && Offset(x) < kRlcWindow;
    const bool belowUr = Offset(x) < Offset(m_ur);
    if ((betweenUrUh && m_buffer.contains(x)) || belowUr)
    {
        ++m_discarded;
        return out;
    }
    m_buffer.emplace(x, pdu);

    if (!InWindow(x))
    {
        m_uh = (x + 1) % kRlcSnModulus;
        const int lower = (m_uh - kRlcWindow + kRlcSnModulus) % kRlcSnModulus;
        // SDUs that fell out of the window go up regardless of gaps
        std::vector<std::pair<int, int>> outside;
        for (const auto& [s, pkt] : m_buffer)
        {
            if (!InWindow(s))
            {
                outside.emplace_back(Offset(s), s);
            }
        }
        std::sort(outside.begin(), outside.end());
        for (auto [off, s] : outside)
        {
            out.push_back(RlcDelivery{m_buffer.at(s), t});
            m_buffer.erase(s);
        }
        if (!InWindow(m_ur))
        {
            const auto skipped = ((lower - m_ur) % kRlcSnModulus + kRlcSnModulus) % kRlcSnModulus;
            m_lost += static_cast<std::uint64_t>(skipped) - outside.size();
            m_ur = lower;
        }
    }

    if (m_buffer.contains(m_ur))
    {
        m_ur = FirstMissingFrom(m_ur);
        DeliverBelow(m_ur, t, out);
    }

    if (m_deadline)
    {
        const bool uxAtOrBelowUr = Offset(m_ux) <= Offset(m_ur);
        const bool uxOutside = !InWindow(m_ux) && m_ux != m_uh;
        if (uxAtOrBelowUr || uxOutside)
        {
            StopTimer();
        }
    }
    if (!m_deadline && Offset(m_uh) > Offset(m_ur))
    {
        StartTimer(t);
    }
    return out;
}

std::vector<RlcDelivery>
RlcUmRx::OnTimer(TimeMs t)
{
    std::vector<RlcDelivery> out;
    if (!m_deadline || *m_deadline != t)
    {
        return out;
    }
    m_deadline.reset();
    const int before = m_ur;
    m_ur = FirstMissingFrom(m_ux);
    // every SN in [before, m_ux) that is not buffered is given up
    for (int s = before; s != m_ux; s = (s + 1) % kRlcSnModulus)
    {
        if (!m_buffer.contains(s))
        {
            ++m_lost;
        }
    }
    DeliverBelow(m_ur, t, out);
    if (Offset(m_uh) > Offset(m_ur))
    {
        StartTimer(t);
    }
    else
    {
        ++m_timerGeneration;
    }
    return out;
}

LayerCrossing
RxChain(const TaggedPacket& pkt, TimeMs macRxTime, TimeMs rlcOutTime, int tbBits)
{
    LayerCrossing lc;
    for (Layer l : kLayers)
    {
        const int k = static_cast<int>(l);
        lc.crossing[k] = l == Layer::MAC ? macRxTime : rlcOutTime;
        lc.delay_ms[k] = static_cast<double>(lc.crossing[k] - pkt.tags[k]);
        lc.bits[k] = l == Layer::MAC ? tbBits : 8 * pkt.SizeBytesAt(l);
    }
    return lc;
}

} // namespace ltev
