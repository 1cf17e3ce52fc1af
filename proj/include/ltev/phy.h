#ifndef LTEV_PHY_H
#define LTEV_PHY_H

#include "ltev/config.h"
#include "ltev/engine.h"
#include "ltev/rng.h"

#include <map>
#include <optional>
#include <vector>

namespace ltev
{

constexpr int kSubcarriersPerRb = 12;
constexpr int kSymbolsPerSubframe = 14;
constexpr int kMaxMcs = 28;

/// Data symbols per subframe after DMRS and the trailing guard symbol.
constexpr int
DataSymbols(int dmrsSymbols = 4)
{
    return kSymbolsPerSubframe - dmrsSymbols - 1;
}

/// Modulation order: 2 (QPSK) for MCS 0-9, 4 for 10-16, 6 for 17-28.
int ModulationOrder(int mcs);

/// Code rate in thousandths, so TBS arithmetic stays exact.
int CodeRateMilli(int mcs);

/// Information bits per resource element, Qm * R.
double SpectralEfficiency(int mcs);

/// floor(nRb * 12 * dataSymbols * Qm * R). Throws std::out_of_range for bad MCS.
int TbsBits(int mcs, int nRb, int dataSymbols = DataSymbols());

/// Smallest RB count whose TBS carries payload + overhead bytes.
int MinRbs(int mcs, int payloadBytes, int overheadBytes = 33, int dataSymbols = DataSymbols());

/// MinRbs, or nullopt ("infeasible") when it exceeds maxRbs.
std::optional<int> MinRbsWithin(int mcs,
                                int payloadBytes,
                                int maxRbs,
                                int overheadBytes = 33,
                                int dataSymbols = DataSymbols());

/// Shannon-gap threshold: 10 log10(2^(Qm R) - 1) + margin.
double SinrThresholdDb(int mcs, double marginDb = 3.0);

/// Control information announced with every transport block.
struct Sci
{
    int tx_id{0};
    int first_subchannel{0};
    int n_subchannels{0};
    int mcs{0};
    int period_ms{0};
    bool retransmission{false};

    bool operator==(const Sci&) const = default;
};

struct TransportBlock
{
    int tx_id{0};
    TimeMs subframe{0};
    int first_subchannel{0};
    int n_subchannels{0};
    int mcs{0};
    int payload_bits{0};
    int padding_bits{0};
    Sci sci;

    int SizeBits() const
    {
        return payload_bits + padding_bits;
    }
};

struct DecodeParams
{
    DecodeMode mode{DecodeMode::DETERMINISTIC};
    double margin_db{3.0};
    double beta_db{0.5};
};

/// 1 / (1 + exp((threshold - sinr) / beta)).
double LogisticSuccessProbability(double sinrDb, double thresholdDb, double betaDb);

/**
 * Link-abstraction decode of one transport block. A receiver that is itself
 * transmitting in the subframe always fails (half-duplex).
 */
bool Decode(const TransportBlock& tb,
            double sinrDb,
            bool receiverTransmitting,
            const DecodeParams& params,
            RngStream& rng);

/// The control channel decodes 3 dB below the data threshold.
bool DecodeSciOk(int mcs, double sinrDb, const DecodeParams& params);

struct RbRange
{
    int first{0};
    int count{0};

    int End() const
    {
        return first + count;
    }

    bool Overlaps(const RbRange& o) const
    {
        return first < o.End() && o.first < End();
    }
};

struct Subchannel
{
    RbRange pscch; ///< empty for R12, where SCI lives in the PSCCH pool
    RbRange pssch;
};

struct GridGeometry
{
    GridLayout layout{GridLayout::HYBRID};
    int n_rb_total{50};
    int subchannel_size_rb{10};
    int pscch_rb_per_subchannel{2};
    int pscch_pool_start_rb{0};
    int pscch_pool_rb{10};
    int pssch_pool_start_rb{10};
};

/**
 * Sidelink resource grid. R12 keeps a separate PSCCH pool and carves the
 * PSSCH pool into data-only subchannels; R14 spreads adjacent PSCCH+PSSCH
 * subchannels over the whole carrier; HYBRID keeps the R12 PSCCH pool and
 * applies R14 subchannelisation to the former PSSCH pool.
 */
class ResourceGrid
{
  public:
    /// Throws std::invalid_argument when the geometry is infeasible.
    explicit ResourceGrid(const GridGeometry& geometry);

    GridLayout Layout() const
    {
        return m_geometry.layout;
    }

    int SubchannelCount() const
    {
        return static_cast<int>(m_subchannels.size());
    }

    const Subchannel& At(int index) const
    {
        return m_subchannels.at(index);
    }

    std::optional<RbRange> PscchPool() const
    {
        return m_pscchPool;
    }

    int PsschRbsPerSubchannel() const;

    /// Subchannels needed to carry a grant of nDataRbs PSSCH RBs.
    int SubchannelsFor(int nDataRbs) const;

    /// RBs used by a transmission on [first, first+n) subchannels, PSCCH included.
    std::vector<RbRange> Footprint(int firstSubchannel, int nSubchannels) const;

    /**
     * Record tx on the given subchannels in a subframe. RBs already owned by
     * another transmitter keep their owner; the return value is the set of
     * transmitters collided with (empty when the booking was clean).
     */
    std::vector<int> Book(TimeMs subframe, int tx, int firstSubchannel, int nSubchannels);

    /// Owner of an RB in a subframe, if booked.
    std::optional<int> Owner(TimeMs subframe, int rb) const;

    /// Drop occupancy records older than the given subframe.
    void Forget(TimeMs before);

  private:
    GridGeometry m_geometry;
    std::optional<RbRange> m_pscchPool;
    std::vector<Subchannel> m_subchannels;
    std::map<TimeMs, std::vector<int>> m_occupancy; // -1 = free
};

GridGeometry GeometryFromConfig(const ScenarioConfig& cfg);

ResourceGrid BuildGrid(const ScenarioConfig& cfg);

} // namespace ltev

#endif /* LTEV_PHY_H */
