#ifndef LTEV_STACK_H
#define LTEV_STACK_H

#include "ltev/config.h"
#include "ltev/engine.h"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ltev
{

/// Instrumented layers, top to bottom.
enum class Layer
{
    APP = 0,
    TRANSPORT,
    NETWORK,
    PDCP,
    RLC,
    MAC,
};

constexpr int kLayerCount = 6;
constexpr std::array<Layer, kLayerCount> kLayers = {
    Layer::APP, Layer::TRANSPORT, Layer::NETWORK, Layer::PDCP, Layer::RLC, Layer::MAC};

std::string LayerName(Layer l);
std::optional<Layer> LayerFromName(const std::string& name);

constexpr int kBroadcast = 0;
constexpr int kRlcSnModulus = 32;
constexpr int kRlcWindow = kRlcSnModulus / 2;

struct HeaderSizes
{
    std::array<int, kLayerCount> bytes{0, 8, 20, 2, 1, 2};

    static HeaderSizes FromConfig(const ScenarioConfig& cfg);

    int Total() const;
};

/**
 * Application payload travelling down the stack. tags[k] is the time the
 * packet entered layer k at the transmitter (T1..T5 for APP..RLC); the MAC
 * tag is stamped when the transport block goes on air.
 */
struct TaggedPacket
{
    std::uint64_t app_seq{0};
    int src{0};
    int dst{kBroadcast};
    int payload_bytes{0};
    std::array<TimeMs, kLayerCount> tags{};
    std::array<int, kLayerCount> header_bytes{};
    int rlc_sn{-1};
    TimeMs mac_rx_time{-1}; ///< set by the receiver on decode

    TimeMs Tag(Layer l) const
    {
        return tags[static_cast<int>(l)];
    }

    /// Size as seen at a layer: payload plus the headers of that layer and above.
    int SizeBytesAt(Layer l) const;
};

/// Per-vehicle application source; app_seq increases by one per send.
class AppSource
{
  public:
    explicit AppSource(int vehicleId)
        : m_vehicle(vehicleId)
    {
    }

    /// Throws std::invalid_argument for a zero payload.
    TaggedPacket Send(int payloadBytes, TimeMs t);

  private:
    int m_vehicle;
    std::uint64_t m_nextSeq{0};
};

/// Adds the layer's header and stamps its tag. RLC also gets its SN from RlcUmTx.
void Encapsulate(Layer layer, TaggedPacket& pkt, TimeMs t, const HeaderSizes& headers);

/// 5-bit UM sequence numbering at the transmitter.
class RlcUmTx
{
  public:
    void Assign(TaggedPacket& pkt)
    {
        pkt.rlc_sn = m_next;
        m_next = (m_next + 1) % kRlcSnModulus;
    }

  private:
    int m_next{0};
};

struct RlcDelivery
{
    TaggedPacket packet;
    TimeMs time_ms;
};

/**
 * RLC-UM receive window with t-Reordering. In-order PDUs pass straight
 * through; a gap holds later PDUs until it fills or the timer expires, at
 * which point the missing SNs are given up as lost.
 */
class RlcUmRx
{
  public:
    explicit RlcUmRx(TimeMs tReorderingMs)
        : m_tReordering(tReorderingMs)
    {
    }

    std::vector<RlcDelivery> Receive(const TaggedPacket& pdu, TimeMs t);

    /// Timer expiry. Ignored unless t matches the running deadline.
    std::vector<RlcDelivery> OnTimer(TimeMs t);

    std::optional<TimeMs> TimerDeadline() const
    {
        return m_deadline;
    }

    /// Bumped whenever the timer is (re)started or stopped.
    std::uint64_t TimerGeneration() const
    {
        return m_timerGeneration;
    }

    std::uint64_t DiscardedCount() const
    {
        return m_discarded;
    }

    std::uint64_t LostCount() const
    {
        return m_lost;
    }

    int ExpectedSn() const
    {
        return m_ur;
    }

  private:
    int Offset(int sn) const; // position relative to the lower window edge
    bool InWindow(int sn) const;
    void DeliverBelow(int sn, TimeMs t, std::vector<RlcDelivery>& out);
    int FirstMissingFrom(int sn) const;
    void StartTimer(TimeMs t);
    void StopTimer();

    TimeMs m_tReordering;
    int m_ur{0}; // VR(UR): earliest SN still awaited
    int m_uh{0}; // VR(UH): one past the highest SN received
    int m_ux{0}; // VR(UX): SN that triggered the running timer
    std::optional<TimeMs> m_deadline;
    std::uint64_t m_timerGeneration{0};
    std::map<int, TaggedPacket> m_buffer;
    std::uint64_t m_discarded{0};
    std::uint64_t m_lost{0};
};

/// Receive-side crossing time and delay of one packet at every layer.
struct LayerCrossing
{
    std::array<TimeMs, kLayerCount> crossing{};
    std::array<double, kLayerCount> delay_ms{};
    std::array<int, kLayerCount> bits{};
};

/**
 * Delays for a packet decoded at MAC at macRxTime and released by RLC at
 * rlcOutTime. Layers above RLC see it at rlcOutTime; MAC bits are the full
 * transport block.
 */
LayerCrossing RxChain(const TaggedPacket& pkt, TimeMs macRxTime, TimeMs rlcOutTime, int tbBits);

} // namespace ltev

#endif /* LTEV_STACK_H */
