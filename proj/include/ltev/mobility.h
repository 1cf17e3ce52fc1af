#ifndef LTEV_MOBILITY_H
#define LTEV_MOBILITY_H

#include "ltev/config.h"
#include "ltev/engine.h"

#include <string_view>
#include <utility>
#include <vector>

namespace ltev
{

struct Waypoint
{
    TimeMs time_ms;
    double x_m;

    bool operator==(const Waypoint&) const = default;
};

/**
 * 1-D trajectory of one vehicle: piecewise-linear between waypoints and
 * held constant before the first and after the last one.
 */
struct Trajectory
{
    int vehicle_id{0};
    std::vector<Waypoint> waypoints;

    double PositionAt(TimeMs t) const;
};

/**
 * Parse the ns2-movements subset (`$node_(k) set X_|Y_|Z_ v` and
 * `$ns_ at t "$node_(k) setdest x y s"`). Node k maps to vehicle k+1.
 * Throws ConfigError with the offending line number.
 */
std::vector<Trajectory> LoadNs2Trace(std::string_view text, int nVehicles);

/**
 * Positions of every vehicle in the platoon over [0, sim_time_ms], either from
 * the analytic straight-line model or from imported trajectories.
 */
class Mobility
{
  public:
    /// Analytic model: x_i(t) = speed*t - (i-1)*(gap+length).
    static Mobility Platoon(int nVehicles,
                            double gapM,
                            double lengthM,
                            double speedMps,
                            TimeMs simTimeMs);

    static Mobility FromTrajectories(std::vector<Trajectory> trajectories,
                                     int nVehicles,
                                     TimeMs simTimeMs);

    /// Builds from the config, reading the trace file when configured.
    static Mobility FromConfig(const ScenarioConfig& cfg);

    double Position(int vehicleId, TimeMs t) const;
    double PairDistance(int i, int j, TimeMs t) const;

    int VehicleCount() const
    {
        return m_nVehicles;
    }

  private:
    void Check(int vehicleId, TimeMs t) const;

    int m_nVehicles{0};
    TimeMs m_simTime{0};
    bool m_analytic{true};
    double m_spacing{0};
    double m_speed{0};
    std::vector<Trajectory> m_trajectories;
};

} // namespace ltev

#endif /* LTEV_MOBILITY_H */
