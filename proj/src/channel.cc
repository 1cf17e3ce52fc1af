#include "ltev/channel.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ltev
{

double
UpdateShadowing(ShadowingState& state, double dN, double dCor, double innovationDb)
{
    if (dN < 0)
    {
        throw std::invalid_argument("shadowing displacement must be >= 0");
    }
    const double rho = std::exp(-dN / dCor);
    const double spread = std::sqrt(1.0 - std::exp(-2.0 * dN / dCor));
    state.s_db = rho * state.s_db - spread * innovationDb;
    ++state.block_index;
    return state.s_db;
}

double
PathlossWinnerDb(double distanceM, double carrierGhz)
{
    const double d = std::max(distanceM, 3.0);
    return 41.0 + 22.7 * std::log10(d) + 20.0 * std::log10(carrierGhz / 5.0);
}

double
PathlossFreeSpaceDb(double distanceM, double carrierGhz)
{
    const double d = std::max(distanceM, 1.0);
    // 20 log10(4 pi d f / c) with f in GHz
    return 20.0 * std::log10(d) + 20.0 * std::log10(carrierGhz) + 32.4478;
}

double
DbmToMw(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

double
MwToDbm(double mw)
{
    return 10.0 * std::log10(mw);
}

double
SinrDb(double rxDbm, std::span<const double> interfererDbm, double noiseDbm)
{
    double denom = DbmToMw(noiseDbm);
    for (double i : interfererDbm)
    {
        denom += DbmToMw(i);
    }
    return 10.0 * std::log10(DbmToMw(rxDbm) / denom);
}

Channel::Channel(const ScenarioConfig& cfg, const Mobility& mobility)
    : m_mobility(mobility),
      m_nVehicles(cfg.n_vehicles),
      m_enabled(cfg.shadowing_enabled),
      m_sigmaDb(cfg.shadow_sigma_db),
      m_dCor(cfg.d_cor_m),
      m_model(cfg.pathloss_model),
      m_carrierGhz(cfg.carrier_ghz)
{
    for (int a = 1; a <= m_nVehicles; ++a)
    {
        for (int b = a + 1; b <= m_nVehicles; ++b)
        {
            ShadowingState s;
            s.tx_id = a;
            s.rx_id = b;
            m_links.push_back(s);
            m_streams.push_back(
                MakeStream(cfg.seed, "shadowing", std::to_string(a) + "-" + std::to_string(b)));
        }
    }
}

std::size_t
Channel::LinkIndex(int a, int b) const
{
    if (a == b || a < 1 || b < 1 || a > m_nVehicles || b > m_nVehicles)
    {
        throw std::out_of_range("invalid link " + std::to_string(a) + "-" + std::to_string(b));
    }
    if (a > b)
    {
        std::swap(a, b);
    }
    // row-major upper triangle without the diagonal
    const std::size_t row = a - 1;
    const std::size_t n = m_nVehicles;
    return row * n - row * (row + 1) / 2 + (b - a - 1);
}

const ShadowingState&
Channel::State(int a, int b) const
{
    return m_links[LinkIndex(a, b)];
}

double
Channel::PathlossDb(double distanceM) const
{
    return m_model == PathlossModel::WINNER_B1_LOS ? PathlossWinnerDb(distanceM, m_carrierGhz)
                                                   : PathlossFreeSpaceDb(distanceM, m_carrierGhz);
}

double
Channel::ShadowingDb(int a, int b) const
{
    return m_enabled ? m_links[LinkIndex(a, b)].s_db : 0.0;
}

double
Channel::RxPowerDbm(double txDbm, int tx, int rx, TimeMs t) const
{
    return txDbm - PathlossDb(m_mobility.PairDistance(tx, rx, t)) - ShadowingDb(tx, rx);
}

void
Channel::OnShadowBlock(TimeMs t)
{
    if (!m_enabled)
    {
        return;
    }
    for (std::size_t k = 0; k < m_links.size(); ++k)
    {
        auto& link = m_links[k];
        std::normal_distribution<double> gauss(0.0, m_sigmaDb);
        const double xa = m_mobility.Position(link.tx_id, t);
        const double xb = m_mobility.Position(link.rx_id, t);
        if (!m_started)
        {
            link.s_db = gauss(m_streams[k]);
            link.block_index = 1;
        }
        else
        {
            const double dN =
                0.5 * (std::abs(xa - link.last_tx_position) + std::abs(xb - link.last_rx_position));
            UpdateShadowing(link, dN, m_dCor, gauss(m_streams[k]));
        }
        link.last_tx_position = xa;
        link.last_rx_position = xb;
    }
    m_started = true;
}

} // namespace ltev
