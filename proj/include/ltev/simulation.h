#ifndef LTEV_SIMULATION_H
#define LTEV_SIMULATION_H

#include "ltev/channel.h"
#include "ltev/config.h"
#include "ltev/engine.h"
#include "ltev/mac-sps.h"
#include "ltev/metrics.h"
#include "ltev/mobility.h"
#include "ltev/phy.h"
#include "ltev/stack.h"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <vector>

namespace ltev
{

/**
 * One scenario run: the platoon, its channel, every vehicle's stack and SPS
 * scheduler, all driven by a single event engine at 1 ms subframes.
 */
class Simulation
{
  public:
    /// Validates the config; throws ConfigError when the grant cannot fit the grid.
    explicit Simulation(const ScenarioConfig& cfg);

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Process every event up to and including tEnd and return the metrics.
    const MetricsStore& RunUntil(TimeMs tEnd);

    /// RunUntil(EndTime()).
    const MetricsStore& Run();

    /**
     * Traffic stops at sim_time_ms; subframes keep ticking for one selection
     * window, the reception delay and t-Reordering so queued packets finish.
     * Geometry is frozen at sim_time_ms during that tail.
     */
    TimeMs EndTime() const
    {
        return m_cfg.sim_time_ms + m_cfg.SelectionWindowEnd() + 1 + m_cfg.t_reordering_ms;
    }

    const MetricsStore& Metrics() const
    {
        return m_metrics;
    }

    std::uint64_t AppArrivals(int vehicle) const;

    /// Hash over (time, seq, kind, vehicle, peer) of every fired event.
    std::uint64_t TraceDigest() const
    {
        return m_digest;
    }

    std::uint64_t EventsFired() const
    {
        return m_fired;
    }

    const ResourceGrid& Grid() const
    {
        return m_grid;
    }

    const Channel& GetChannel() const
    {
        return *m_channel;
    }

    int NeededSubchannels() const
    {
        return m_neededSubchannels;
    }

    /// Transport blocks emitted so far, oldest first (kept only when tracing).
    const std::vector<TransportBlock>& EmittedBlocks() const
    {
        return m_emitted;
    }

    void KeepEmittedBlocks(bool keep)
    {
        m_keepEmitted = keep;
    }

  private:
    struct Vehicle
    {
        int id{0};
        bool transmitter{false};
        std::unique_ptr<AppSource> app;
        std::unique_ptr<SpsScheduler> sps;
        RlcUmTx rlcTx;
        std::deque<TaggedPacket> queue;
        std::unique_ptr<SensingHistory> history;
        std::map<int, RlcUmRx> rlcRx; // by source vehicle
        RngStream decodeRng;
        std::uint64_t arrivals{0};
    };

    struct OnAir
    {
        TransportBlock tb;
        TaggedPacket packet;
    };

    void Handle(const Event& ev);
    TimeMs GeometryTime(TimeMs t) const
    {
        return std::min(t, m_cfg.sim_time_ms);
    }

    void OnAppArrival(TimeMs t, int vehicle);
    void OnSubframe(TimeMs t);
    void OnRlcTimer(TimeMs t, int rx, int src, std::uint64_t token);
    void Deliver(int rx, const std::vector<RlcDelivery>& deliveries, int tbBits);
    void ArmTimer(int rx, int src);
    void Receive(int rx, const OnAir& air, const std::vector<OnAir>& all, TimeMs t);
    void Sense(TimeMs t, const std::vector<OnAir>& all, const std::vector<bool>& transmitting);

    ScenarioConfig m_cfg;
    Engine m_engine;
    Mobility m_mobility;
    std::unique_ptr<Channel> m_channel;
    ResourceGrid m_grid;
    HeaderSizes m_headers;
    DecodeParams m_decode;
    int m_dataSymbols;
    int m_neededSubchannels;
    int m_tbsBits;
    bool m_grantFits;
    std::vector<Vehicle> m_vehicles; // index 0 = vehicle 1
    MetricsStore m_metrics;
    std::vector<TransportBlock> m_emitted;
    bool m_keepEmitted{false};
    bool m_started{false};
    std::uint64_t m_digest{0xcbf29ce484222325ULL};
    std::uint64_t m_fired{0};
};

} // namespace ltev

#endif /* LTEV_SIMULATION_H */
