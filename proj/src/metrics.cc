#include "ltev/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ltev
{

LevelRequirement
Requirement(AutomationLevel level)
{
    if (level == AutomationLevel::L1_L2)
    {
        return {AutomationLevel::L1_L2, 0.90, 25.0, 5};
    }
    return {AutomationLevel::L3_L5, 0.9999, 10.0, 5};
}

std::string
ToString(AutomationLevel level)
{
    return level == AutomationLevel::L1_L2 ? "L1_L2" : "L3_L5";
}

MetricsStore::MetricsStore(int nVehicles, TimeMs simTimeMs, std::string scenarioId, std::uint64_t seed)
    : m_simTimeMs(simTimeMs),
      m_scenarioId(std::move(scenarioId)),
      m_seed(seed),
      m_receivers(nVehicles)
{
}

ReceiverRecord&
MetricsStore::Mutable(int vehicle)
{
    if (vehicle < 1 || vehicle > VehicleCount())
    {
        throw std::out_of_range("vehicle " + std::to_string(vehicle) + " not in store");
    }
    auto& slot = m_receivers[vehicle - 1];
    if (!slot)
    {
        slot.emplace();
    }
    return *slot;
}

void
MetricsStore::AddTransmitted(int rx, std::uint64_t count)
{
    Mutable(rx).tx_count += count;
}

void
MetricsStore::RecordMac(int rx, double delayMs, int tbBits)
{
    auto& r = Mutable(rx);
    const int k = static_cast<int>(Layer::MAC);
    r.delays[k].push_back(delayMs);
    r.bits[k] += static_cast<std::uint64_t>(tbBits);
}

void
MetricsStore::RecordDelivery(int rx, int src, std::uint64_t appSeq, const LayerCrossing& crossing)
{
    auto& r = Mutable(rx);
    ++r.rx_count;
    DeliveredPacket p{src, appSeq, crossing.delay_ms};
    for (Layer l : kLayers)
    {
        if (l == Layer::MAC)
        {
            continue;
        }
        const int k = static_cast<int>(l);
        r.delays[k].push_back(crossing.delay_ms[k]);
        r.bits[k] += static_cast<std::uint64_t>(crossing.bits[k]);
    }
    r.packets.push_back(p);
}

bool
MetricsStore::Empty() const
{
    return std::none_of(m_receivers.begin(), m_receivers.end(), [](const auto& r) {
        return r.has_value();
    });
}

bool
MetricsStore::IsReceiver(int vehicle) const
{
    return vehicle >= 1 && vehicle <= VehicleCount() && m_receivers[vehicle - 1].has_value();
}

const ReceiverRecord&
MetricsStore::Receiver(int vehicle) const
{
    if (!IsReceiver(vehicle))
    {
        throw std::out_of_range("vehicle " + std::to_string(vehicle) + " has no receive record");
    }
    return *m_receivers[vehicle - 1];
}

std::vector<int>
MetricsStore::Receivers() const
{
    std::vector<int> out;
    for (int v = 1; v <= VehicleCount(); ++v)
    {
        if (IsReceiver(v))
        {
            out.push_back(v);
        }
    }
    return out;
}

double
Pdr(const MetricsStore& store, int vehicle)
{
    const auto& r = store.Receiver(vehicle);
    if (r.tx_count == 0)
    {
        throw std::domain_error("PDR undefined: no packets transmitted to vehicle " +
                                std::to_string(vehicle));
    }
    return static_cast<double>(r.rx_count) / static_cast<double>(r.tx_count);
}

double
PdrWithin(const MetricsStore& store, int vehicle, double maxLatencyMs)
{
    const auto& r = store.Receiver(vehicle);
    if (r.tx_count == 0)
    {
        throw std::domain_error("PDR undefined: no packets transmitted to vehicle " +
                                std::to_string(vehicle));
    }
    const auto onTime = std::count_if(r.packets.begin(), r.packets.end(), [&](const auto& p) {
        return p.delay_ms[static_cast<int>(Layer::APP)] <= maxLatencyMs;
    });
    return static_cast<double>(onTime) / static_cast<double>(r.tx_count);
}

int
PlatoonLengthFromPdrs(const std::vector<double>& followerPdrs, double minReliability)
{
    int length = 1;
    for (double p : followerPdrs)
    {
        if (p < minReliability)
        {
            break;
        }
        ++length;
    }
    return length;
}

int
PlatoonLength(const MetricsStore& store, const LevelRequirement& req)
{
    std::vector<double> pdrs;
    for (int v = 2; v <= store.VehicleCount(); ++v)
    {
        if (!store.IsReceiver(v) || store.Receiver(v).tx_count == 0)
        {
            pdrs.push_back(0.0);
            continue;
        }
        pdrs.push_back(PdrWithin(store, v, req.max_latency_ms));
    }
    return PlatoonLengthFromPdrs(pdrs, req.min_reliability);
}

double
Percentile(std::vector<double> values, double p)
{
    if (values.empty())
    {
        throw std::invalid_argument("percentile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * values.size()));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

std::vector<LayerStats>
LayerProfile(const MetricsStore& store, int vehicle)
{
    std::vector<LayerStats> out;
    if (!store.IsReceiver(vehicle))
    {
        return out;
    }
    const auto& r = store.Receiver(vehicle);
    for (Layer l : kLayers)
    {
        const auto& d = r.delays[static_cast<int>(l)];
        if (d.empty())
        {
            continue;
        }
        LayerStats s;
        s.layer = l;
        s.mean_delay_ms = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
        s.p95_delay_ms = Percentile(d, 95.0);
        s.throughput_kbps = static_cast<double>(r.bits[static_cast<int>(l)]) /
                            static_cast<double>(store.SimTimeMs());
        out.push_back(s);
    }
    return out;
}

} // namespace ltev
