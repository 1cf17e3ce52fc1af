#ifndef LTEV_CHANNEL_H
#define LTEV_CHANNEL_H

#include "ltev/config.h"
#include "ltev/engine.h"
#include "ltev/mobility.h"
#include "ltev/rng.h"

#include <span>
#include <vector>

namespace ltev
{

/**
 * Block-correlated shadowing of one link, in dB. s_db holds the sample of
 * the current block; it is redrawn once per shadowing block.
 */
struct ShadowingState
{
    int tx_id{0};
    int rx_id{0};
    double s_db{0.0};
    std::int64_t block_index{0};
    double last_tx_position{0.0};
    double last_rx_position{0.0};
};

/**
 * One step of the correlated shadowing recursion:
 *
 *   S_n = exp(-d_n/d_cor) * S_{n-1} - sqrt(1 - exp(-2 d_n/d_cor)) * N_n
 *
 * The innovation N_n is a zero-mean Gaussian in dB with the same standard
 * deviation as S_1, which keeps the process stationary. Advances the state
 * and returns the new S_n. Throws std::invalid_argument if d_n < 0.
 */
double UpdateShadowing(ShadowingState& state, double dN, double dCor, double innovationDb);

/// WINNER-B1-LOS shaped log-distance law with a 3 m floor.
double PathlossWinnerDb(double distanceM, double carrierGhz = 5.9);

/// Free-space loss with a 1 m floor.
double PathlossFreeSpaceDb(double distanceM, double carrierGhz = 5.9);

double DbmToMw(double dbm);
double MwToDbm(double mw);

/// 10 log10(rx / (noise + sum of interferers)), all powers in dBm.
double SinrDb(double rxDbm, std::span<const double> interfererDbm, double noiseDbm);

/**
 * Large-scale channel between every pair of vehicles: pathloss from the
 * current distance plus a shadowing process per unordered vehicle pair.
 */
class Channel
{
  public:
    Channel(const ScenarioConfig& cfg, const Mobility& mobility);

    double PathlossDb(double distanceM) const;

    /// Current S_n of the link (0 when shadowing is disabled).
    double ShadowingDb(int a, int b) const;

    /// tx power minus pathloss minus current shadowing.
    double RxPowerDbm(double txDbm, int tx, int rx, TimeMs t) const;

    /**
     * Block boundary at time t: the first call draws S_1 for every link,
     * later calls advance each link with d_n equal to the mean displacement
     * of its two endpoints since the previous block.
     */
    void OnShadowBlock(TimeMs t);

    const ShadowingState& State(int a, int b) const;

  private:
    std::size_t LinkIndex(int a, int b) const;

    const Mobility& m_mobility;
    int m_nVehicles;
    bool m_enabled;
    double m_sigmaDb;
    double m_dCor;
    PathlossModel m_model;
    double m_carrierGhz;
    bool m_started{false};
    std::vector<ShadowingState> m_links;
    std::vector<RngStream> m_streams;
};

} // namespace ltev

#endif /* LTEV_CHANNEL_H */
