#include "ltev/phy.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ltev
{

namespace
{

void
CheckMcs(int mcs)
{
    if (mcs < 0 || mcs > kMaxMcs)
    {
        throw std::out_of_range("MCS " + std::to_string(mcs) + " outside 0..28");
    }
}

} // namespace

int
ModulationOrder(int mcs)
{
    CheckMcs(mcs);
    if (mcs <= 9)
    {
        return 2;
    }
    return mcs <= 16 ? 4 : 6;
}

int
CodeRateMilli(int mcs)
{
    CheckMcs(mcs);
    if (mcs <= 9)
    {
        return 120 + 60 * mcs;
    }
    if (mcs <= 16)
    {
        return 330 + 50 * (mcs - 10);
    }
    return 430 + 45 * (mcs - 17);
}

double
SpectralEfficiency(int mcs)
{
    return ModulationOrder(mcs) * CodeRateMilli(mcs) / 1000.0;
}

int
TbsBits(int mcs, int nRb, int dataSymbols)
{
    CheckMcs(mcs);
    if (nRb < 0)
    {
        throw std::invalid_argument("negative RB count");
    }
    const std::int64_t res = static_cast<std::int64_t>(nRb) * kSubcarriersPerRb * dataSymbols;
    return static_cast<int>(res * ModulationOrder(mcs) * CodeRateMilli(mcs) / 1000);
}

int
MinRbs(int mcs, int payloadBytes, int overheadBytes, int dataSymbols)
{
    const int needBits = 8 * (payloadBytes + overheadBytes);
    const int perRb = TbsBits(mcs, 1, dataSymbols);
    // ceil(need / perRb) is a lower bound; floor() in TbsBits can push one higher
    int n = (needBits + perRb - 1) / perRb;
    while (TbsBits(mcs, n, dataSymbols) < needBits)
    {
        ++n;
    }
    while (n > 0 && TbsBits(mcs, n - 1, dataSymbols) >= needBits)
    {
        --n;
    }
    return n;
}

std::optional<int>
MinRbsWithin(int mcs, int payloadBytes, int maxRbs, int overheadBytes, int dataSymbols)
{
    const int n = MinRbs(mcs, payloadBytes, overheadBytes, dataSymbols);
    if (n > maxRbs)
    {
        return std::nullopt;
    }
    return n;
}

double
SinrThresholdDb(int mcs, double marginDb)
{
    return 10.0 * std::log10(std::pow(2.0, SpectralEfficiency(mcs)) - 1.0) + marginDb;
}

double
LogisticSuccessProbability(double sinrDb, double thresholdDb, double betaDb)
{
    return 1.0 / (1.0 + std::exp((thresholdDb - sinrDb) / betaDb));
}

bool
Decode(const TransportBlock& tb,
       double sinrDb,
       bool receiverTransmitting,
       const DecodeParams& params,
       RngStream& rng)
{
    if (receiverTransmitting)
    {
        return false;
    }
    const double threshold = SinrThresholdDb(tb.mcs, params.margin_db);
    if (params.mode == DecodeMode::DETERMINISTIC)
    {
        return sinrDb >= threshold;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < LogisticSuccessProbability(sinrDb, threshold, params.beta_db);
}

bool
DecodeSciOk(int mcs, double sinrDb, const DecodeParams& params)
{
    return sinrDb >= SinrThresholdDb(mcs, params.margin_db) - 3.0;
}

ResourceGrid::ResourceGrid(const GridGeometry& g)
    : m_geometry(g)
{
    if (g.subchannel_size_rb < g.pscch_rb_per_subchannel + 1 ||
        g.n_rb_total < g.subchannel_size_rb || g.pscch_rb_per_subchannel < 0)
    {
        throw std::invalid_argument(
            "grid geometry needs n_rb_total >= subchannel_size_rb >= pscch_rb_per_subchannel + 1");
    }

    RbRange psschPool{0, g.n_rb_total};
    if (g.layout != GridLayout::R14)
    {
        RbRange pool{g.pscch_pool_start_rb, g.pscch_pool_rb};
        psschPool = RbRange{g.pssch_pool_start_rb, g.n_rb_total - g.pssch_pool_start_rb};
        if (pool.count < 1 || pool.End() > g.n_rb_total || psschPool.count < 1)
        {
            throw std::invalid_argument("PSCCH/PSSCH pools do not fit in the carrier");
        }
        if (pool.Overlaps(psschPool))
        {
            throw std::invalid_argument("PSCCH pool overlaps the PSSCH pool");
        }
        m_pscchPool = pool;
    }

    const int n = psschPool.count / g.subchannel_size_rb;
    if (n < 1)
    {
        throw std::invalid_argument("PSSCH pool smaller than one subchannel");
    }
    for (int k = 0; k < n; ++k)
    {
        const int base = psschPool.first + k * g.subchannel_size_rb;
        Subchannel sc;
        if (g.layout == GridLayout::R12)
        {
            sc.pssch = RbRange{base, g.subchannel_size_rb};
        }
        else
        {
            sc.pscch = RbRange{base, g.pscch_rb_per_subchannel};
            sc.pssch = RbRange{base + g.pscch_rb_per_subchannel,
                               g.subchannel_size_rb - g.pscch_rb_per_subchannel};
        }
        m_subchannels.push_back(sc);
    }
    if (g.layout == GridLayout::R12 && n * g.pscch_rb_per_subchannel > g.pscch_pool_rb)
    {
        throw std::invalid_argument("PSCCH pool too small for one SCI slot per subchannel");
    }
}

int
ResourceGrid::PsschRbsPerSubchannel() const
{
    return m_subchannels.front().pssch.count;
}

int
ResourceGrid::SubchannelsFor(int nDataRbs) const
{
    const int per = PsschRbsPerSubchannel();
    return (nDataRbs + per - 1) / per;
}

std::vector<RbRange>
ResourceGrid::Footprint(int firstSubchannel, int nSubchannels) const
{
    if (firstSubchannel < 0 || nSubchannels < 1 || firstSubchannel + nSubchannels > SubchannelCount())
    {
        throw std::out_of_range("subchannel range outside the grid");
    }
    std::vector<RbRange> rbs;
    if (m_geometry.layout == GridLayout::R12)
    {
        // SCI slot in the pool, indexed by the first subchannel
        rbs.push_back(RbRange{m_pscchPool->first + firstSubchannel * m_geometry.pscch_rb_per_subchannel,
                              m_geometry.pscch_rb_per_subchannel});
    }
    for (int k = firstSubchannel; k < firstSubchannel + nSubchannels; ++k)
    {
        if (m_subchannels[k].pscch.count > 0)
        {
            rbs.push_back(m_subchannels[k].pscch);
        }
        rbs.push_back(m_subchannels[k].pssch);
    }
    return rbs;
}

std::vector<int>
ResourceGrid::Book(TimeMs subframe, int tx, int firstSubchannel, int nSubchannels)
{
    auto& row = m_occupancy[subframe];
    if (row.empty())
    {
        row.assign(m_geometry.n_rb_total, -1);
    }
    std::vector<int> collided;
    for (const auto& range : Footprint(firstSubchannel, nSubchannels))
    {
        for (int rb = range.first; rb < range.End(); ++rb)
        {
            if (row[rb] < 0)
            {
                row[rb] = tx;
            }
            else if (row[rb] != tx &&
                     std::find(collided.begin(), collided.end(), row[rb]) == collided.end())
            {
                collided.push_back(row[rb]);
            }
        }
    }
    return collided;
}

std::optional<int>
ResourceGrid::Owner(TimeMs subframe, int rb) const
{
    auto it = m_occupancy.find(subframe);
    if (it == m_occupancy.end() || it->second[rb] < 0)
    {
        return std::nullopt;
    }
    return it->second[rb];
}

void
ResourceGrid::Forget(TimeMs before)
{
    m_occupancy.erase(m_occupancy.begin(), m_occupancy.lower_bound(before));
}

GridGeometry
GeometryFromConfig(const ScenarioConfig& cfg)
{
    GridGeometry g;
    g.layout = cfg.grid_layout;
    g.n_rb_total = cfg.n_rb_total;
    g.subchannel_size_rb = cfg.subchannel_size_rb;
    g.pscch_rb_per_subchannel = cfg.pscch_rb_per_subchannel;
    g.pscch_pool_start_rb = cfg.pscch_pool_start_rb;
    g.pscch_pool_rb = cfg.pscch_pool_rb;
    g.pssch_pool_start_rb = cfg.pssch_pool_start_rb;
    return g;
}

ResourceGrid
BuildGrid(const ScenarioConfig& cfg)
{
    return ResourceGrid(GeometryFromConfig(cfg));
}

} // namespace ltev
