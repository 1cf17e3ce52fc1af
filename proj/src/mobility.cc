#include "ltev/mobility.h"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ltev
{

double
Trajectory::PositionAt(TimeMs t) const
{
    if (waypoints.empty())
    {
        return 0.0;
    }
    if (t <= waypoints.front().time_ms)
    {
        return waypoints.front().x_m;
    }
    for (std::size_t k = 1; k < waypoints.size(); ++k)
    {
        const auto& a = waypoints[k - 1];
        const auto& b = waypoints[k];
        if (t <= b.time_ms)
        {
            if (b.time_ms == a.time_ms)
            {
                return b.x_m;
            }
            double frac = static_cast<double>(t - a.time_ms) / static_cast<double>(b.time_ms - a.time_ms);
            return a.x_m + frac * (b.x_m - a.x_m);
        }
    }
    return waypoints.back().x_m;
}

namespace
{

// Truncates the trajectory at t and returns the position there.
double
CutAt(Trajectory& tr, TimeMs t)
{
    double x = tr.PositionAt(t);
    while (!tr.waypoints.empty() && tr.waypoints.back().time_ms > t)
    {
        tr.waypoints.pop_back();
    }
    if (tr.waypoints.size() == 1 && tr.waypoints.front().x_m == x)
    {
        // stationary since the initial position; clamping covers [0, t]
        tr.waypoints.front().time_ms = t;
    }
    else if (tr.waypoints.empty() || tr.waypoints.back().time_ms != t)
    {
        tr.waypoints.push_back({t, x});
    }
    return x;
}

} // namespace

std::vector<Trajectory>
LoadNs2Trace(std::string_view text, int nVehicles)
{
    static const std::regex setRe(
        R"(^\$node_\((\d+)\)\s+set\s+([XYZ])_\s+([-+0-9.eE]+)$)");
    static const std::regex destRe(
        R"raw(^\$ns_\s+at\s+([-+0-9.eE]+)\s+"\$node_\((\d+)\)\s+setdest\s+([-+0-9.eE]+)\s+([-+0-9.eE]+)\s+([-+0-9.eE]+)"$)raw");

    std::vector<Trajectory> out(nVehicles);
    std::vector<bool> hasInitial(nVehicles, false);
    std::vector<TimeMs> lastCommand(nVehicles, 0);
    for (int i = 0; i < nVehicles; ++i)
    {
        out[i].vehicle_id = i + 1;
    }

    auto nodeIndex = [&](const std::string& s, int lineNo) {
        long k = std::stol(s);
        if (k < 0 || k >= nVehicles)
        {
            throw ConfigError("node index " + s + " outside 0.." + std::to_string(nVehicles - 1),
                              lineNo);
        }
        return static_cast<int>(k);
    };
    auto number = [](const std::string& s, int lineNo) {
        try
        {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v))
            {
                throw std::invalid_argument(s);
            }
            return v;
        }
        catch (const std::exception&)
        {
            throw ConfigError("malformed number '" + s + "'", lineNo);
        }
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw))
    {
        ++lineNo;
        auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#')
        {
            continue;
        }
        auto last = raw.find_last_not_of(" \t\r");
        std::string line = raw.substr(first, last - first + 1);
        std::smatch m;
        if (std::regex_match(line, m, setRe))
        {
            int k = nodeIndex(m[1].str(), lineNo);
            double v = number(m[3].str(), lineNo);
            if (m[2].str() == "X")
            {
                out[k].waypoints = {{0, v}};
                hasInitial[k] = true;
            }
        }
        else if (std::regex_match(line, m, destRe))
        {
            double tSec = number(m[1].str(), lineNo);
            int k = nodeIndex(m[2].str(), lineNo);
            double x = number(m[3].str(), lineNo);
            double speed = number(m[5].str(), lineNo);
            if (tSec < 0 || speed < 0)
            {
                throw ConfigError("negative time or speed", lineNo);
            }
            if (!hasInitial[k])
            {
                throw ConfigError("setdest before initial X_ of node " + m[2].str(), lineNo);
            }
            auto t = static_cast<TimeMs>(std::llround(tSec * 1000.0));
            if (t < lastCommand[k])
            {
                // out-of-order commands are rejected rather than re-sorted
                throw ConfigError("setdest earlier than a previous command", lineNo);
            }
            lastCommand[k] = t;
            double from = CutAt(out[k], t);
            double dist = std::abs(x - from);
            if (dist == 0.0)
            {
                continue;
            }
            if (speed == 0.0)
            {
                throw ConfigError("zero speed towards a different destination", lineNo);
            }
            auto arrive = t + static_cast<TimeMs>(std::llround(dist / speed * 1000.0));
            out[k].waypoints.push_back({arrive, x});
        }
        else
        {
            throw ConfigError("unrecognised ns2 movement line '" + line + "'", lineNo);
        }
    }
    for (int k = 0; k < nVehicles; ++k)
    {
        if (!hasInitial[k])
        {
            throw ConfigError("trace has no initial X_ for node " + std::to_string(k));
        }
    }
    return out;
}

Mobility
Mobility::Platoon(int nVehicles, double gapM, double lengthM, double speedMps, TimeMs simTimeMs)
{
    Mobility m;
    m.m_nVehicles = nVehicles;
    m.m_simTime = simTimeMs;
    m.m_analytic = true;
    m.m_spacing = gapM + lengthM;
    m.m_speed = speedMps;
    return m;
}

Mobility
Mobility::FromTrajectories(std::vector<Trajectory> trajectories, int nVehicles, TimeMs simTimeMs)
{
    if (static_cast<int>(trajectories.size()) != nVehicles)
    {
        throw std::invalid_argument("trajectory count does not match vehicle count");
    }
    Mobility m;
    m.m_nVehicles = nVehicles;
    m.m_simTime = simTimeMs;
    m.m_analytic = false;
    m.m_trajectories = std::move(trajectories);
    return m;
}

Mobility
Mobility::FromConfig(const ScenarioConfig& cfg)
{
    if (cfg.mobility_source == MobilitySource::PLATOON_MODEL)
    {
        return Platoon(cfg.n_vehicles,
                       cfg.inter_vehicle_gap_m,
                       cfg.vehicle_length_m,
                       cfg.speed_mps,
                       cfg.sim_time_ms);
    }
    std::ifstream in(*cfg.trace_path);
    if (!in)
    {
        throw std::runtime_error("cannot open trace file '" + *cfg.trace_path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return FromTrajectories(LoadNs2Trace(ss.str(), cfg.n_vehicles), cfg.n_vehicles, cfg.sim_time_ms);
}

void
Mobility::Check(int vehicleId, TimeMs t) const
{
    if (vehicleId < 1 || vehicleId > m_nVehicles)
    {
        throw std::out_of_range("vehicle id " + std::to_string(vehicleId) + " outside 1.." +
                                std::to_string(m_nVehicles));
    }
    if (t < 0 || t > m_simTime)
    {
        throw std::out_of_range("time " + std::to_string(t) + " outside simulation span");
    }
}

double
Mobility::Position(int vehicleId, TimeMs t) const
{
    Check(vehicleId, t);
    if (m_analytic)
    {
        return m_speed * static_cast<double>(t) / 1000.0 - (vehicleId - 1) * m_spacing;
    }
    return m_trajectories[vehicleId - 1].PositionAt(t);
}

double
Mobility::PairDistance(int i, int j, TimeMs t) const
{
    if (m_analytic)
    {
        Check(i, t);
        Check(j, t);
        return std::abs(i - j) * m_spacing;
    }
    return std::abs(Position(i, t) - Position(j, t));
}

} // namespace ltev
