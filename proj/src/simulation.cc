#include "ltev/simulation.h"

#include <algorithm>
#include <cmath>

namespace ltev
{

namespace
{

void
Mix(std::uint64_t& h, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
    {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
}

} // namespace

Simulation::Simulation(const ScenarioConfig& cfg)
    : m_cfg((Validate(cfg), cfg)),
      m_mobility(Mobility::FromConfig(cfg)),
      m_channel(std::make_unique<Channel>(cfg, m_mobility)),
      m_grid(BuildGrid(cfg)),
      m_headers(HeaderSizes::FromConfig(cfg)),
      m_decode{cfg.decode_mode, cfg.sinr_margin_db, cfg.logistic_beta_db},
      m_dataSymbols(DataSymbols(cfg.dmrs_symbols)),
      m_neededSubchannels(m_grid.SubchannelsFor(cfg.n_rbs)),
      m_tbsBits(TbsBits(cfg.mcs, cfg.n_rbs, m_dataSymbols)),
      m_grantFits(8 * (cfg.app_packet_bytes + m_headers.Total()) <= m_tbsBits),
      m_metrics(cfg.n_vehicles, cfg.sim_time_ms, ScenarioId(cfg, cfg.seed), cfg.seed)
{
    if (m_neededSubchannels > m_grid.SubchannelCount())
    {
        throw ConfigError("n_rbs: grant of " + std::to_string(cfg.n_rbs) + " RBs needs " +
                          std::to_string(m_neededSubchannels) + " subchannels, grid has " +
                          std::to_string(m_grid.SubchannelCount()));
    }

    SpsScheduler::Params sps;
    sps.sense.needed_subchannels = m_neededSubchannels;
    sps.sense.period_ms = cfg.app_interval_ms;
    sps.sense.rsrp_threshold_dbm = cfg.sps_rsrp_threshold_dbm;
    sps.t1_ms = cfg.selection_window_t1_ms;
    sps.t2_ms = cfg.SelectionWindowEnd();
    sps.keep_probability = cfg.sps_keep_probability;

    m_vehicles.resize(cfg.n_vehicles);
    for (int i = 0; i < cfg.n_vehicles; ++i)
    {
        auto& v = m_vehicles[i];
        v.id = i + 1;
        v.transmitter = cfg.traffic_pattern == TrafficPattern::ALL_BROADCAST || v.id == 1;
        v.app = std::make_unique<AppSource>(v.id);
        v.decodeRng = MakeStream(cfg.seed, "decode", v.id);
        if (v.transmitter)
        {
            v.sps = std::make_unique<SpsScheduler>(sps, MakeStream(cfg.seed, "sps", v.id));
            v.history = std::make_unique<SensingHistory>(m_grid.SubchannelCount(),
                                                         cfg.sps_sensing_window_ms);
        }
    }
}

std::uint64_t
Simulation::AppArrivals(int vehicle) const
{
    return m_vehicles.at(vehicle - 1).arrivals;
}

const MetricsStore&
Simulation::Run()
{
    return RunUntil(EndTime());
}

const MetricsStore&
Simulation::RunUntil(TimeMs tEnd)
{
    if (!m_started)
    {
        m_started = true;
        m_engine.Schedule(0, EventKind::SHADOW_BLOCK);
        for (const auto& v : m_vehicles)
        {
            if (!v.transmitter)
            {
                continue;
            }
            auto phaseRng = MakeStream(m_cfg.seed, "app", v.id);
            std::uniform_int_distribution<int> phase(0, m_cfg.app_interval_ms - 1);
            const TimeMs first = phase(phaseRng);
            if (first < m_cfg.sim_time_ms)
            {
                m_engine.Schedule(first, EventKind::APP_ARRIVAL, {v.id, 0, 0});
            }
        }
        m_engine.Schedule(0, EventKind::SUBFRAME_TICK);
    }
    m_fired += m_engine.RunUntil(tEnd, [this](const Event& ev) { Handle(ev); });
    return m_metrics;
}

void
Simulation::Handle(const Event& ev)
{
    Mix(m_digest, static_cast<std::uint64_t>(ev.time_ms));
    Mix(m_digest, ev.seq);
    Mix(m_digest, static_cast<std::uint64_t>(ev.kind));
    Mix(m_digest, static_cast<std::uint64_t>(ev.payload.vehicle));
    Mix(m_digest, static_cast<std::uint64_t>(ev.payload.peer));

    switch (ev.kind)
    {
    case EventKind::APP_ARRIVAL:
        OnAppArrival(ev.time_ms, ev.payload.vehicle);
        break;
    case EventKind::SUBFRAME_TICK:
        OnSubframe(ev.time_ms);
        if (ev.time_ms < EndTime())
        {
            m_engine.Schedule(ev.time_ms + 1, EventKind::SUBFRAME_TICK);
        }
        else
        {
            m_engine.Schedule(ev.time_ms, EventKind::SIM_END);
        }
        break;
    case EventKind::SHADOW_BLOCK:
        m_channel->OnShadowBlock(ev.time_ms);
        if (ev.time_ms + m_cfg.shadow_block_ms <= m_cfg.sim_time_ms)
        {
            m_engine.Schedule(ev.time_ms + m_cfg.shadow_block_ms, EventKind::SHADOW_BLOCK);
        }
        break;
    case EventKind::RLC_TIMER:
        OnRlcTimer(ev.time_ms, ev.payload.vehicle, ev.payload.peer, ev.payload.token);
        break;
    case EventKind::SIM_END: {
        auto& c = m_metrics.Counters();
        c.rlc_discarded = 0;
        c.rlc_lost = 0;
        c.sps_selections = 0;
        for (const auto& v : m_vehicles)
        {
            for (const auto& [src, rx] : v.rlcRx)
            {
                c.rlc_discarded += rx.DiscardedCount();
                c.rlc_lost += rx.LostCount();
            }
            if (v.sps)
            {
                c.sps_selections += v.sps->SelectionCount();
            }
        }
        break;
    }
    }
}

void
Simulation::OnAppArrival(TimeMs t, int vehicle)
{
    auto& v = m_vehicles[vehicle - 1];
    ++v.arrivals;
    ++m_metrics.Counters().app_packets;

    TaggedPacket pkt = v.app->Send(m_cfg.app_packet_bytes, t);
    for (Layer l : {Layer::TRANSPORT, Layer::NETWORK, Layer::PDCP, Layer::RLC})
    {
        Encapsulate(l, pkt, t, m_headers);
    }
    v.rlcTx.Assign(pkt);

    for (const auto& other : m_vehicles)
    {
        const bool receiver = other.id != vehicle &&
                              (m_cfg.traffic_pattern == TrafficPattern::ALL_BROADCAST || vehicle == 1);
        if (receiver)
        {
            m_metrics.AddTransmitted(other.id);
        }
    }

    if (!m_grantFits)
    {
        ++m_metrics.Counters().grant_overflow;
    }
    else
    {
        v.queue.push_back(pkt);
        v.history->Evict(t);
        v.sps->OnPacketArrival(t, *v.history);
    }

    const TimeMs next = t + m_cfg.app_interval_ms;
    if (next < m_cfg.sim_time_ms)
    {
        m_engine.Schedule(next, EventKind::APP_ARRIVAL, {vehicle, 0, 0});
    }
}

void
Simulation::OnSubframe(TimeMs t)
{
    std::vector<OnAir> air;
    std::vector<bool> transmitting(m_vehicles.size(), false);
    for (auto& v : m_vehicles)
    {
        if (!v.sps || !v.sps->EmitsAt(t))
        {
            continue;
        }
        const Reservation res = *v.sps->Current();
        if (v.queue.empty())
        {
            v.sps->OnOccasion(t, false);
            continue;
        }
        OnAir a;
        a.packet = v.queue.front();
        v.queue.pop_front();
        a.packet.header_bytes[static_cast<int>(Layer::MAC)] = m_headers.bytes[static_cast<int>(Layer::MAC)];
        a.packet.tags[static_cast<int>(Layer::MAC)] = t;

        a.tb.tx_id = v.id;
        a.tb.subframe = t;
        a.tb.first_subchannel = res.first_subchannel;
        a.tb.n_subchannels = res.n_subchannels;
        a.tb.mcs = m_cfg.mcs;
        a.tb.payload_bits = 8 * a.packet.SizeBytesAt(Layer::MAC);
        a.tb.padding_bits = m_tbsBits - a.tb.payload_bits;
        a.tb.sci = BuildSci(v.id, res, m_cfg.mcs);

        if (!m_grid.Book(t, v.id, res.first_subchannel, res.n_subchannels).empty())
        {
            ++m_metrics.Counters().collisions;
        }
        ++m_metrics.Counters().transport_blocks;
        transmitting[v.id - 1] = true;
        v.sps->OnOccasion(t, true);
        if (m_keepEmitted)
        {
            m_emitted.push_back(a.tb);
        }
        air.push_back(std::move(a));
    }

    for (const auto& a : air)
    {
        for (const auto& rx : m_vehicles)
        {
            if (rx.id == a.tb.tx_id)
            {
                continue;
            }
            if (transmitting[rx.id - 1])
            {
                ++m_metrics.Counters().half_duplex_misses;
                continue;
            }
            Receive(rx.id, a, air, t);
        }
    }

    Sense(t, air, transmitting);
    m_grid.Forget(t);
}

void
Simulation::Receive(int rxId, const OnAir& a, const std::vector<OnAir>& all, TimeMs t)
{
    auto& rx = m_vehicles[rxId - 1];
    const double rxDbm = m_channel->RxPowerDbm(m_cfg.tx_power_dbm, a.tb.tx_id, rxId, GeometryTime(t));
    std::vector<double> interferers;
    for (const auto& other : all)
    {
        if (other.tb.tx_id == a.tb.tx_id || other.tb.tx_id == rxId)
        {
            continue;
        }
        const bool overlap = other.tb.first_subchannel < a.tb.first_subchannel + a.tb.n_subchannels &&
                             a.tb.first_subchannel < other.tb.first_subchannel + other.tb.n_subchannels;
        if (overlap)
        {
            interferers.push_back(
                m_channel->RxPowerDbm(m_cfg.tx_power_dbm, other.tb.tx_id, rxId, GeometryTime(t)));
        }
    }
    const double sinr = SinrDb(rxDbm, interferers, m_cfg.noise_dbm);

    if (rx.history)
    {
        if (auto rec = DecodeSci(a.tb.sci, sinr, t, rxDbm, m_decode))
        {
            rx.history->AddReservation(*rec);
        }
    }

    const bool intended = m_cfg.traffic_pattern == TrafficPattern::ALL_BROADCAST || a.tb.tx_id == 1;
    if (!intended)
    {
        return;
    }
    if (!Decode(a.tb, sinr, false, m_decode, rx.decodeRng))
    {
        ++m_metrics.Counters().decode_failures;
        return;
    }

    const TimeMs rxTime = t + 1;
    const double macDelay = static_cast<double>(rxTime - a.packet.Tag(Layer::MAC));
    m_metrics.RecordMac(rxId, macDelay, a.tb.SizeBits());

    auto [it, inserted] = rx.rlcRx.try_emplace(a.tb.tx_id, m_cfg.t_reordering_ms);
    const auto generation = it->second.TimerGeneration();
    TaggedPacket pdu = a.packet;
    pdu.mac_rx_time = rxTime;
    Deliver(rxId, it->second.Receive(pdu, rxTime), a.tb.SizeBits());
    if (it->second.TimerGeneration() != generation)
    {
        ArmTimer(rxId, a.tb.tx_id);
    }
}

void
Simulation::Deliver(int rx, const std::vector<RlcDelivery>& deliveries, int tbBits)
{
    for (const auto& d : deliveries)
    {
        m_metrics.RecordDelivery(rx,
                                 d.packet.src,
                                 d.packet.app_seq,
                                 RxChain(d.packet, d.packet.mac_rx_time, d.time_ms, tbBits));
    }
}

void
Simulation::ArmTimer(int rx, int src)
{
    const auto& state = m_vehicles[rx - 1].rlcRx.at(src);
    if (auto deadline = state.TimerDeadline())
    {
        m_engine.Schedule(*deadline, EventKind::RLC_TIMER, {rx, src, state.TimerGeneration()});
    }
}

void
Simulation::OnRlcTimer(TimeMs t, int rx, int src, std::uint64_t token)
{
    auto& state = m_vehicles[rx - 1].rlcRx.at(src);
    if (state.TimerGeneration() != token)
    {
        return;
    }
    Deliver(rx, state.OnTimer(t), m_tbsBits);
    if (state.TimerGeneration() != token)
    {
        ArmTimer(rx, src);
    }
}

void
Simulation::Sense(TimeMs t, const std::vector<OnAir>& air, const std::vector<bool>& transmitting)
{
    const int nSub = m_grid.SubchannelCount();
    const double noiseMw = DbmToMw(m_cfg.noise_dbm);
    std::vector<double> rowMw(nSub);
    std::vector<double> rowDbm(nSub);
    for (auto& v : m_vehicles)
    {
        if (!v.history)
        {
            continue;
        }
        if (transmitting[v.id - 1])
        {
            v.history->RecordUnsensed(t);
            continue;
        }
        std::fill(rowMw.begin(), rowMw.end(), noiseMw);
        for (const auto& a : air)
        {
            const double p =
                DbmToMw(m_channel->RxPowerDbm(m_cfg.tx_power_dbm, a.tb.tx_id, v.id, GeometryTime(t)));
            for (int s = a.tb.first_subchannel; s < a.tb.first_subchannel + a.tb.n_subchannels; ++s)
            {
                rowMw[s] += p;
            }
        }
        for (int s = 0; s < nSub; ++s)
        {
            rowDbm[s] = MwToDbm(rowMw[s]);
        }
        v.history->RecordRssi(t, rowDbm);
    }
}

} // namespace ltev
