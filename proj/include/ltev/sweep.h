#ifndef LTEV_SWEEP_H
#define LTEV_SWEEP_H

#include "ltev/config.h"
#include "ltev/metrics.h"

#include <string>
#include <vector>

namespace ltev
{

struct VehiclePdr
{
    int vehicle;
    std::uint64_t tx;
    std::uint64_t rx;
    double pdr;
};

struct LayerRow
{
    int vehicle;
    LayerStats stats;
};

/// What a single run contributes to the CSV outputs.
struct RunSummary
{
    std::string scenario_id;
    std::uint64_t seed{0};
    bool shadowing{false};
    std::vector<VehiclePdr> pdr;
    std::vector<LayerRow> layers;
    int length_l1_l2{1};
    int length_l3_l5{1};
    RunCounters counters;
};

RunSummary Summarise(const MetricsStore& store, bool shadowing);

/// Build, run and summarise one scenario.
RunSummary RunScenario(const ScenarioConfig& cfg);

/// Reference path: one run after another on the calling thread.
std::vector<RunSummary> RunSweepSerial(const std::vector<ScenarioConfig>& points);

/**
 * Same results as RunSweepSerial, with runs spread over OpenMP threads.
 * Each run is independent and writes only its own output slot.
 */
std::vector<RunSummary> RunSweepParallel(const std::vector<ScenarioConfig>& points);

/// The (seed, shadowing) grid of a PDR sweep, shadowing-off runs first.
std::vector<ScenarioConfig> PdrSweepPoints(const ScenarioConfig& base,
                                           int nSeeds,
                                           const std::vector<bool>& shadowing);

struct MeanLength
{
    bool shadowing;
    AutomationLevel level;
    double length;
};

/// Mean platoon length per (shadowing, level), shadowing off first, L1_L2 first.
std::vector<MeanLength> MeanPlatoonLengths(const std::vector<RunSummary>& runs);

} // namespace ltev

#endif /* LTEV_SWEEP_H */
