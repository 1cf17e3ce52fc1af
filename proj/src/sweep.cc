#include "ltev/sweep.h"

#include "ltev/simulation.h"

#include <exception>
#include <omp.h>

namespace ltev
{

RunSummary
Summarise(const MetricsStore& store, bool shadowing)
{
    RunSummary s;
    s.scenario_id = store.ScenarioId();
    s.seed = store.Seed();
    s.shadowing = shadowing;
    for (int v : store.Receivers())
    {
        const auto& r = store.Receiver(v);
        s.pdr.push_back({v, r.tx_count, r.rx_count, r.tx_count > 0 ? Pdr(store, v) : 0.0});
        for (const auto& st : LayerProfile(store, v))
        {
            s.layers.push_back({v, st});
        }
    }
    s.length_l1_l2 = PlatoonLength(store, Requirement(AutomationLevel::L1_L2));
    s.length_l3_l5 = PlatoonLength(store, Requirement(AutomationLevel::L3_L5));
    s.counters = store.Counters();
    return s;
}

RunSummary
RunScenario(const ScenarioConfig& cfg)
{
    Simulation sim(cfg);
    return Summarise(sim.Run(), cfg.shadowing_enabled);
}

std::vector<RunSummary>
RunSweepSerial(const std::vector<ScenarioConfig>& points)
{
    std::vector<RunSummary> out;
    out.reserve(points.size());
    for (const auto& p : points)
    {
        out.push_back(RunScenario(p));
    }
    return out;
}

std::vector<RunSummary>
RunSweepParallel(const std::vector<ScenarioConfig>& points)
{
    std::vector<RunSummary> out(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    const auto n = static_cast<std::int64_t>(points.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i)
    {
        // exceptions must not escape an OpenMP region
        try
        {
            out[i] = RunScenario(points[i]);
        }
        catch (...)
        {
            errors[i] = std::current_exception();
        }
    }

    for (const auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    return out;
}

std::vector<ScenarioConfig>
PdrSweepPoints(const ScenarioConfig& base, int nSeeds, const std::vector<bool>& shadowing)
{
    std::vector<ScenarioConfig> points;
    for (bool on : shadowing)
    {
        for (int k = 0; k < nSeeds; ++k)
        {
            ScenarioConfig c = base;
            c.shadowing_enabled = on;
            c.seed = base.seed + static_cast<std::uint64_t>(k);
            points.push_back(c);
        }
    }
    return points;
}

std::vector<MeanLength>
MeanPlatoonLengths(const std::vector<RunSummary>& runs)
{
    std::vector<MeanLength> out;
    for (bool on : {false, true})
    {
        double l12 = 0.0;
        double l35 = 0.0;
        int n = 0;
        for (const auto& r : runs)
        {
            if (r.shadowing != on)
            {
                continue;
            }
            l12 += r.length_l1_l2;
            l35 += r.length_l3_l5;
            ++n;
        }
        if (n == 0)
        {
            continue;
        }
        out.push_back({on, AutomationLevel::L1_L2, l12 / n});
        out.push_back({on, AutomationLevel::L3_L5, l35 / n});
    }
    return out;
}

} // namespace ltev
