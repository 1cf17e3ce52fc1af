// Wall-clock comparison of the serial and OpenMP sweep paths.
// Usage: ltev-bench [seeds] [sim_time_ms]

#include "ltev/config.h"
#include "ltev/sweep.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

using namespace ltev;

namespace
{

template <typename F>
double
TimeSeconds(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool
SameResults(const std::vector<RunSummary>& a, const std::vector<RunSummary>& b)
{
    if (a.size() != b.size())
    {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (a[i].scenario_id != b[i].scenario_id || a[i].pdr.size() != b[i].pdr.size() ||
            a[i].length_l1_l2 != b[i].length_l1_l2 || a[i].length_l3_l5 != b[i].length_l3_l5)
        {
            return false;
        }
        for (std::size_t k = 0; k < a[i].pdr.size(); ++k)
        {
            if (a[i].pdr[k].rx != b[i].pdr[k].rx || a[i].pdr[k].tx != b[i].pdr[k].tx)
            {
                return false;
            }
        }
    }
    return true;
}

} // namespace

int
main(int argc, char** argv)
{
    const int seeds = argc > 1 ? std::atoi(argv[1]) : 4;
    ScenarioConfig base = DefaultScenario();
    if (argc > 2)
    {
        base.sim_time_ms = std::atoll(argv[2]);
    }
    const auto points = PdrSweepPoints(base, seeds, {false, true});

    std::vector<RunSummary> serial;
    std::vector<RunSummary> parallel;
    const double ts = TimeSeconds([&] { serial = RunSweepSerial(points); });
    const double tp = TimeSeconds([&] { parallel = RunSweepParallel(points); });

    std::printf("runs %zu  threads %d\n", points.size(), omp_get_max_threads());
    std::printf("serial   %.3f s\n", ts);
    std::printf("openmp   %.3f s  speedup %.2fx\n", tp, tp > 0 ? ts / tp : 0.0);
    const bool same = SameResults(serial, parallel);
    std::printf("results  %s\n", same ? "identical" : "DIFFER");
    return same ? 0 : 1;
}
