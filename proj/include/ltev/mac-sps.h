#ifndef LTEV_MAC_SPS_H
#define LTEV_MAC_SPS_H

#include "ltev/engine.h"
#include "ltev/phy.h"
#include "ltev/rng.h"

#include <deque>
#include <optional>
#include <vector>

namespace ltev
{

/// A reservation learnt from a decoded SCI.
struct ReservationRecord
{
    int tx_id{0};
    TimeMs rx_subframe{0};
    int first_subchannel{0};
    int n_subchannels{0};
    int period_ms{0};
    double rsrp_dbm{0.0};

    bool operator==(const ReservationRecord&) const = default;
};

/**
 * What a vehicle heard over the trailing sensing window: per-subchannel
 * RSSI of every subframe (absent where the vehicle was transmitting) and
 * the reservations announced in decoded SCIs.
 */
class SensingHistory
{
  public:
    SensingHistory(int nSubchannels, int windowMs);

    /// One RSSI value (dBm) per subchannel.
    void RecordRssi(TimeMs subframe, const std::vector<double>& rssiDbm);

    /// Subframe spent transmitting; nothing was measured.
    void RecordUnsensed(TimeMs subframe);

    void AddReservation(const ReservationRecord& r);

    /// Evict everything received at or before now - window.
    void Evict(TimeMs now);

    /**
     * Highest RSRP among reservations whose projections rx + k*period
     * (k >= 1) land on the subframe and overlap the subchannel range.
     */
    std::optional<double> ReservedRsrp(TimeMs subframe, int firstSubchannel, int nSubchannels) const;

    /**
     * Linear-mean RSSI (mW) over the samples at y - k*period inside the
     * window, across the given subchannels. Unsensed samples count as the
     * window average of those subchannels. nullopt when nothing was sensed.
     */
    std::optional<double> MeanRssiMw(TimeMs y, int firstSubchannel, int nSubchannels, int periodMs) const;

    /// Mean over every sensed sample of the subchannels; NaN when none.
    double WindowAverageMw(int firstSubchannel, int nSubchannels) const;

    int SubchannelCount() const
    {
        return m_nSubchannels;
    }

    int WindowMs() const
    {
        return m_windowMs;
    }

    struct Row
    {
        TimeMs subframe;
        std::vector<double> rssi_mw; // empty = unsensed
    };

    const std::deque<Row>& Rows() const
    {
        return m_rows;
    }

    const std::vector<ReservationRecord>& Reservations() const
    {
        return m_reservations;
    }

  private:
    const Row* Find(TimeMs subframe) const;

    int m_nSubchannels;
    int m_windowMs;
    std::deque<Row> m_rows; // ascending subframe
    std::vector<ReservationRecord> m_reservations;
};

struct SelectionWindow
{
    TimeMs first{0};
    TimeMs last{0};
};

struct Candidate
{
    TimeMs subframe{0};
    int first_subchannel{0};

    bool operator==(const Candidate&) const = default;
};

struct SenseParams
{
    int needed_subchannels{1};
    int period_ms{20};
    double rsrp_threshold_dbm{-110.0};
    double rssi_resolution_db{0.1};
};

/**
 * Two-step mode-4 candidate filtering. Step 1 excludes candidates that
 * collide with a projected reservation at RSRP >= threshold, relaxing the
 * threshold by 3 dB until at least 20% of the pool survives. Step 2 keeps
 * the 20% (of the original pool, at least 1) with the lowest mean RSSI;
 * ties go to the earlier subframe, then the lower subchannel.
 * Returns the survivors in rank order. Throws on an empty window.
 */
std::vector<Candidate> Sense(const SensingHistory& history,
                             const SelectionWindow& window,
                             const SenseParams& params);

struct Reservation
{
    TimeMs next_subframe{0};
    int first_subchannel{0};
    int n_subchannels{0};
    int period_ms{0};

    bool operator==(const Reservation&) const = default;
};

struct Selection
{
    Candidate candidate;
    int reselection_counter{0};
};

/// Uniform pick among candidates; counter uniform in [5, 15].
Selection SelectResource(const std::vector<Candidate>& candidates, RngStream& rng);

Sci BuildSci(int txId, const Reservation& r, int mcs);

/// The announced reservation when the SCI decodes, otherwise nullopt.
std::optional<ReservationRecord> DecodeSci(const Sci& sci,
                                           double sinrDb,
                                           TimeMs rxSubframe,
                                           double rsrpDbm,
                                           const DecodeParams& params);

/**
 * Per-vehicle semi-persistent scheduler. Resource (re)selection happens on
 * a packet arrival when no reservation is active; the reservation then
 * repeats every period until its counter runs out.
 */
class SpsScheduler
{
  public:
    struct Params
    {
        SenseParams sense;
        int t1_ms{1};
        int t2_ms{20};
        double keep_probability{0.0};
    };

    SpsScheduler(const Params& params, RngStream rng);

    /// Returns true when a fresh selection was made for this arrival.
    bool OnPacketArrival(TimeMs t, const SensingHistory& history);

    bool EmitsAt(TimeMs t) const
    {
        return m_reservation && m_reservation->next_subframe == t;
    }

    /// Advance past an occasion; transmitted=false leaves the counter alone.
    void OnOccasion(TimeMs t, bool transmitted);

    const std::optional<Reservation>& Current() const
    {
        return m_reservation;
    }

    int Counter() const
    {
        return m_counter;
    }

    std::uint64_t SelectionCount() const
    {
        return m_selections;
    }

  private:
    Params m_params;
    RngStream m_rng;
    std::optional<Reservation> m_reservation;
    int m_counter{0};
    std::uint64_t m_selections{0};
};

} // namespace ltev

#endif /* LTEV_MAC_SPS_H */
