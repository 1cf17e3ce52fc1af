#ifndef LTEV_METRICS_H
#define LTEV_METRICS_H

#include "ltev/engine.h"
#include "ltev/stack.h"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ltev
{

enum class AutomationLevel
{
    L1_L2,
    L3_L5,
};

struct LevelRequirement
{
    AutomationLevel level;
    double min_reliability;
    double max_latency_ms;
    int min_length;
};

/// Platooning requirements per automation level.
LevelRequirement Requirement(AutomationLevel level);

std::string ToString(AutomationLevel level);

struct DeliveredPacket
{
    int src{0};
    std::uint64_t app_seq{0};
    std::array<double, kLayerCount> delay_ms{};
};

struct ReceiverRecord
{
    std::uint64_t tx_count{0};
    std::uint64_t rx_count{0};
    std::array<std::vector<double>, kLayerCount> delays;
    std::array<std::uint64_t, kLayerCount> bits{};
    std::vector<DeliveredPacket> packets;
};

struct RunCounters
{
    std::uint64_t app_packets{0};
    std::uint64_t transport_blocks{0};
    std::uint64_t grant_overflow{0};
    std::uint64_t collisions{0};
    std::uint64_t half_duplex_misses{0};
    std::uint64_t decode_failures{0};
    std::uint64_t rlc_discarded{0};
    std::uint64_t rlc_lost{0};
    std::uint64_t sps_selections{0};
};

/**
 * Everything a run measured, indexed by receiving vehicle (1-based). Only
 * vehicles that are receivers in the traffic pattern carry records.
 */
class MetricsStore
{
  public:
    MetricsStore() = default;
    MetricsStore(int nVehicles, TimeMs simTimeMs, std::string scenarioId, std::uint64_t seed);

    void AddTransmitted(int rx, std::uint64_t count = 1);

    /// MAC-level reception of a transport block.
    void RecordMac(int rx, double delayMs, int tbBits);

    /// Packet released by RLC and carried up to APP.
    void RecordDelivery(int rx, int src, std::uint64_t appSeq, const LayerCrossing& crossing);

    bool Empty() const;

    int VehicleCount() const
    {
        return static_cast<int>(m_receivers.size());
    }

    bool IsReceiver(int vehicle) const;

    const ReceiverRecord& Receiver(int vehicle) const;

    std::vector<int> Receivers() const;

    TimeMs SimTimeMs() const
    {
        return m_simTimeMs;
    }

    const std::string& ScenarioId() const
    {
        return m_scenarioId;
    }

    std::uint64_t Seed() const
    {
        return m_seed;
    }

    RunCounters& Counters()
    {
        return m_counters;
    }

    const RunCounters& Counters() const
    {
        return m_counters;
    }

  private:
    ReceiverRecord& Mutable(int vehicle);

    TimeMs m_simTimeMs{0};
    std::string m_scenarioId;
    std::uint64_t m_seed{0};
    std::vector<std::optional<ReceiverRecord>> m_receivers;
    RunCounters m_counters;
};

/// rx / tx over every delivery. Throws std::domain_error when tx_count is 0.
double Pdr(const MetricsStore& store, int vehicle);

/// Deliveries whose APP delay is within maxLatencyMs, over tx_count.
double PdrWithin(const MetricsStore& store, int vehicle, double maxLatencyMs);

/**
 * 1 (the leader) plus the longest run V2..V(k+1) of followers that all meet
 * the reliability counting only packets within the latency bound.
 */
int PlatoonLength(const MetricsStore& store, const LevelRequirement& req);

/// Same rule on precomputed per-follower PDRs (V2 first).
int PlatoonLengthFromPdrs(const std::vector<double>& followerPdrs, double minReliability);

struct LayerStats
{
    Layer layer;
    double mean_delay_ms;
    double p95_delay_ms;
    double throughput_kbps;
};

/// One entry per layer that saw at least one delivery.
std::vector<LayerStats> LayerProfile(const MetricsStore& store, int vehicle);

/// Nearest-rank percentile (p in (0, 100]) of an unsorted sample.
double Percentile(std::vector<double> values, double p);

} // namespace ltev

#endif /* LTEV_METRICS_H */
