#include "ltev/mac-sps.h"

#include "ltev/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltev
{

SensingHistory::SensingHistory(int nSubchannels, int windowMs)
    : m_nSubchannels(nSubchannels),
      m_windowMs(windowMs)
{
}

void
SensingHistory::RecordRssi(TimeMs subframe, const std::vector<double>& rssiDbm)
{
    if (static_cast<int>(rssiDbm.size()) != m_nSubchannels)
    {
        throw std::invalid_argument("RSSI row must have one value per subchannel");
    }
    if (!m_rows.empty() && m_rows.back().subframe >= subframe)
    {
        throw std::logic_error("sensing rows must be recorded in increasing subframe order");
    }
    Row row{subframe, {}};
    row.rssi_mw.reserve(rssiDbm.size());
    for (double v : rssiDbm)
    {
        row.rssi_mw.push_back(DbmToMw(v));
    }
    m_rows.push_back(std::move(row));
}

void
SensingHistory::RecordUnsensed(TimeMs subframe)
{
    if (!m_rows.empty() && m_rows.back().subframe >= subframe)
    {
        throw std::logic_error("sensing rows must be recorded in increasing subframe order");
    }
    m_rows.push_back(Row{subframe, {}});
}

void
SensingHistory::AddReservation(const ReservationRecord& r)
{
    m_reservations.push_back(r);
}

void
SensingHistory::Evict(TimeMs now)
{
    const TimeMs oldest = now - m_windowMs;
    while (!m_rows.empty() && m_rows.front().subframe <= oldest)
    {
        m_rows.pop_front();
    }
    std::erase_if(m_reservations, [oldest](const ReservationRecord& r) {
        return r.rx_subframe <= oldest;
    });
}

const SensingHistory::Row*
SensingHistory::Find(TimeMs subframe) const
{
    auto it = std::lower_bound(m_rows.begin(), m_rows.end(), subframe, [](const Row& r, TimeMs t) {
        return r.subframe < t;
    });
    if (it == m_rows.end() || it->subframe != subframe)
    {
        return nullptr;
    }
    return &*it;
}

double
SensingHistory::WindowAverageMw(int firstSubchannel, int nSubchannels) const
{
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : m_rows)
    {
        if (row.rssi_mw.empty())
        {
            continue;
        }
        for (int s = firstSubchannel; s < firstSubchannel + nSubchannels; ++s)
        {
            sum += row.rssi_mw[s];
            ++count;
        }
    }
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / count;
}

std::optional<double>
SensingHistory::ReservedRsrp(TimeMs subframe, int firstSubchannel, int nSubchannels) const
{
    std::optional<double> best;
    const int last = firstSubchannel + nSubchannels;
    for (const auto& r : m_reservations)
    {
        if (r.period_ms <= 0 || subframe <= r.rx_subframe)
        {
            continue;
        }
        if ((subframe - r.rx_subframe) % r.period_ms != 0)
        {
            continue;
        }
        if (r.first_subchannel >= last || firstSubchannel >= r.first_subchannel + r.n_subchannels)
        {
            continue;
        }
        if (!best || r.rsrp_dbm > *best)
        {
            best = r.rsrp_dbm;
        }
    }
    return best;
}

std::optional<double>
SensingHistory::MeanRssiMw(TimeMs y, int firstSubchannel, int nSubchannels, int periodMs) const
{
    if (m_rows.empty() || periodMs <= 0)
    {
        return std::nullopt;
    }
    double sum = 0.0;
    std::size_t count = 0;
    std::optional<double> fill;
    for (TimeMs t = y - periodMs; t >= m_rows.front().subframe; t -= periodMs)
    {
        const Row* row = Find(t);
        if (row == nullptr)
        {
            continue;
        }
        for (int s = firstSubchannel; s < firstSubchannel + nSubchannels; ++s)
        {
            if (row->rssi_mw.empty())
            {
                if (!fill)
                {
                    fill = WindowAverageMw(firstSubchannel, nSubchannels);
                }
                if (std::isnan(*fill))
                {
                    continue;
                }
                sum += *fill;
            }
            else
            {
                sum += row->rssi_mw[s];
            }
            ++count;
        }
    }
    if (count == 0)
    {
        return std::nullopt;
    }
    return sum / count;
}

std::vector<Candidate>
Sense(const SensingHistory& history, const SelectionWindow& window, const SenseParams& params)
{
    if (window.last < window.first)
    {
        throw std::invalid_argument("empty selection window");
    }
    const int nSub = history.SubchannelCount();
    const int starts = nSub - params.needed_subchannels + 1;
    if (params.needed_subchannels < 1 || starts < 1)
    {
        throw std::invalid_argument("needed subchannels do not fit in the grid");
    }

    struct Scored
    {
        Candidate c;
        double reservedRsrp; // -inf when unreserved
        double rssiKey;
    };
    std::vector<Scored> pool;
    for (TimeMs y = window.first; y <= window.last; ++y)
    {
        for (int s = 0; s < starts; ++s)
        {
            // an empty history leaves every candidate unmeasured and tied
            Scored sc{{y, s},
                      -std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
            if (auto rsrp = history.ReservedRsrp(y, s, params.needed_subchannels))
            {
                sc.reservedRsrp = *rsrp;
            }
            auto mw = history.MeanRssiMw(y, s, params.needed_subchannels, params.period_ms);
            if (!mw)
            {
                // no sample at y - kP yet (start of run): rank as a typical slot
                const double avg = history.WindowAverageMw(s, params.needed_subchannels);
                if (!std::isnan(avg))
                {
                    mw = avg;
                }
            }
            if (mw)
            {
                // measurement resolution: ranking compares quantised dBm values
                sc.rssiKey = std::round(MwToDbm(*mw) / params.rssi_resolution_db);
            }
            pool.push_back(sc);
        }
    }

    const std::size_t target = std::max<std::size_t>(1, pool.size() / 5);
    double threshold = params.rsrp_threshold_dbm;
    std::vector<Scored> survivors;
    while (true)
    {
        survivors.clear();
        for (const auto& sc : pool)
        {
            if (sc.reservedRsrp < threshold)
            {
                survivors.push_back(sc);
            }
        }
        if (survivors.size() >= target)
        {
            break;
        }
        threshold += 3.0;
    }

    std::stable_sort(survivors.begin(), survivors.end(), [](const Scored& a, const Scored& b) {
        if (a.rssiKey != b.rssiKey)
        {
            return a.rssiKey < b.rssiKey;
        }
        if (a.c.subframe != b.c.subframe)
        {
            return a.c.subframe < b.c.subframe;
        }
        return a.c.first_subchannel < b.c.first_subchannel;
    });
    survivors.resize(target);

    std::vector<Candidate> out;
    out.reserve(target);
    for (const auto& sc : survivors)
    {
        out.push_back(sc.c);
    }
    return out;
}

Selection
SelectResource(const std::vector<Candidate>& candidates, RngStream& rng)
{
    if (candidates.empty())
    {
        throw std::invalid_argument("no candidate resources to select from");
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    std::uniform_int_distribution<int> counter(5, 15);
    Selection sel;
    sel.candidate = candidates[pick(rng)];
    sel.reselection_counter = counter(rng);
    return sel;
}

Sci
BuildSci(int txId, const Reservation& r, int mcs)
{
    Sci sci;
    sci.tx_id = txId;
    sci.first_subchannel = r.first_subchannel;
    sci.n_subchannels = r.n_subchannels;
    sci.mcs = mcs;
    sci.period_ms = r.period_ms;
    sci.retransmission = false;
    return sci;
}

std::optional<ReservationRecord>
DecodeSci(const Sci& sci,
          double sinrDb,
          TimeMs rxSubframe,
          double rsrpDbm,
          const DecodeParams& params)
{
    if (!DecodeSciOk(sci.mcs, sinrDb, params))
    {
        return std::nullopt;
    }
    return ReservationRecord{sci.tx_id,
                             rxSubframe,
                             sci.first_subchannel,
                             sci.n_subchannels,
                             sci.period_ms,
                             rsrpDbm};
}

SpsScheduler::SpsScheduler(const Params& params, RngStream rng)
    : m_params(params),
      m_rng(std::move(rng))
{
}

bool
SpsScheduler::OnPacketArrival(TimeMs t, const SensingHistory& history)
{
    if (m_reservation)
    {
        return false;
    }
    SelectionWindow window{t + m_params.t1_ms, t + m_params.t2_ms};
    auto candidates = Sense(history, window, m_params.sense);
    auto sel = SelectResource(candidates, m_rng);
    m_reservation = Reservation{sel.candidate.subframe,
                                sel.candidate.first_subchannel,
                                m_params.sense.needed_subchannels,
                                m_params.sense.period_ms};
    m_counter = sel.reselection_counter;
    ++m_selections;
    return true;
}

void
SpsScheduler::OnOccasion(TimeMs t, bool transmitted)
{
    if (!EmitsAt(t))
    {
        return;
    }
    m_reservation->next_subframe += m_reservation->period_ms;
    if (!transmitted)
    {
        return;
    }
    if (--m_counter > 0)
    {
        return;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(m_rng) < m_params.keep_probability)
    {
        std::uniform_int_distribution<int> counter(5, 15);
        m_counter = counter(m_rng);
    }
    else
    {
        m_reservation.reset();
    }
}

} // namespace ltev
