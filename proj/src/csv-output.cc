#include "ltev/csv-output.h"

#include "ltev/phy.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace ltev
{

std::string
FormatNumber(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

namespace
{

const char*
OnOff(bool on)
{
    return on ? "on" : "off";
}

} // namespace

std::vector<RbSweepRow>
RbSweep(const std::vector<int>& mcs,
        const std::vector<int>& sizes,
        const std::vector<int>& intervals,
        int maxRbs)
{
    std::vector<RbSweepRow> rows;
    for (int m : mcs)
    {
        for (int s : sizes)
        {
            const auto n = MinRbsWithin(m, s, maxRbs);
            for (int i : intervals)
            {
                rows.push_back({m, s, i, n ? *n : -1});
            }
        }
    }
    return rows;
}

void
WritePdrCsv(std::ostream& os, const RunSummary& run)
{
    os << "scenario_id,vehicle,tx,rx,pdr\n";
    for (const auto& p : run.pdr)
    {
        os << run.scenario_id << ',' << p.vehicle << ',' << p.tx << ',' << p.rx << ','
           << FormatNumber(p.pdr) << '\n';
    }
}

void
WriteLayerCsv(std::ostream& os, const RunSummary& run)
{
    os << "scenario_id,vehicle,layer,mean_delay_ms,p95_delay_ms,throughput_kbps\n";
    for (const auto& l : run.layers)
    {
        os << run.scenario_id << ',' << l.vehicle << ',' << LayerName(l.stats.layer) << ','
           << FormatNumber(l.stats.mean_delay_ms) << ',' << FormatNumber(l.stats.p95_delay_ms)
           << ',' << FormatNumber(l.stats.throughput_kbps) << '\n';
    }
}

void
WriteRunPlatoonCsv(std::ostream& os, const RunSummary& run)
{
    os << "scenario_id,shadowing,level,length\n";
    os << run.scenario_id << ',' << OnOff(run.shadowing) << ','
       << ToString(AutomationLevel::L1_L2) << ',' << run.length_l1_l2 << '\n';
    os << run.scenario_id << ',' << OnOff(run.shadowing) << ','
       << ToString(AutomationLevel::L3_L5) << ',' << run.length_l3_l5 << '\n';
}

void
WriteRbSweepCsv(std::ostream& os, const std::vector<RbSweepRow>& rows)
{
    os << "mcs,size_bytes,interval_ms,min_rbs\n";
    for (const auto& r : rows)
    {
        os << r.mcs << ',' << r.size_bytes << ',' << r.interval_ms << ',';
        if (r.min_rbs < 0)
        {
            os << "infeasible";
        }
        else
        {
            os << r.min_rbs;
        }
        os << '\n';
    }
}

void
WritePdrSweepCsv(std::ostream& os, std::vector<RunSummary> runs)
{
    std::sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
        return std::tie(a.shadowing, a.seed) < std::tie(b.shadowing, b.seed);
    });
    os << "scenario_id,seed,shadowing,vehicle,tx,rx,pdr\n";
    for (const auto& run : runs)
    {
        for (const auto& p : run.pdr)
        {
            os << run.scenario_id << ',' << run.seed << ',' << OnOff(run.shadowing) << ','
               << p.vehicle << ',' << p.tx << ',' << p.rx << ',' << FormatNumber(p.pdr) << '\n';
        }
    }
}

void
WriteSweepPlatoonCsv(std::ostream& os,
                     const std::string& sweepId,
                     const std::vector<RunSummary>& runs)
{
    os << "scenario_id,shadowing,level,length\n";
    for (const auto& m : MeanPlatoonLengths(runs))
    {
        os << sweepId << ',' << OnOff(m.shadowing) << ',' << ToString(m.level) << ','
           << FormatNumber(m.length) << '\n';
    }
}

std::string
SweepId(const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds)
{
    std::string text = RenderScenario(base);
    text += "seeds =";
    for (auto s : seeds)
    {
        text += ' ' + std::to_string(s);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(StableHash(text)));
    return std::string(buf, 12);
}

void
WriteFile(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << text;
    out.flush();
    if (!out)
    {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace ltev
