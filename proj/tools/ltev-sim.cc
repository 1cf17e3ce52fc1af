// Command-line front end: single runs, RB sweeps and PDR sweeps.
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include "ltev/config.h"
#include "ltev/csv-output.h"
#include "ltev/sweep.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;
using namespace ltev;

namespace
{

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

ScenarioConfig
LoadConfig(const std::string& path)
{
    if (path.empty())
    {
        return DefaultScenario();
    }
    if (!fs::is_regular_file(path))
    {
        throw UsageError("config file not found: " + path);
    }
    try
    {
        return LoadScenarioFile(path);
    }
    catch (const ConfigError& e)
    {
        throw UsageError(path + ": " + e.what());
    }
}

void
PrepareOutDir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
    {
        throw std::runtime_error("cannot create output directory " + dir);
    }
}

std::string
Hex16(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

template <typename F>
std::string
Render(F&& write)
{
    std::ostringstream os;
    write(os);
    return os.str();
}

void
CmdRun(const std::string& configPath, std::uint64_t seed, const std::string& out)
{
    ScenarioConfig cfg = LoadConfig(configPath);
    cfg.seed = seed;
    try
    {
        Validate(cfg);
    }
    catch (const ConfigError& e)
    {
        throw UsageError(e.what());
    }
    PrepareOutDir(out);

    const RunSummary run = RunScenario(cfg);
    const fs::path dir(out);
    WriteFile((dir / "pdr.csv").string(), Render([&](std::ostream& os) { WritePdrCsv(os, run); }));
    WriteFile((dir / "layer_metrics.csv").string(),
              Render([&](std::ostream& os) { WriteLayerCsv(os, run); }));
    WriteFile((dir / "platoon.csv").string(),
              Render([&](std::ostream& os) { WriteRunPlatoonCsv(os, run); }));

    const std::string manifest = "scenario_id=" + run.scenario_id +
                                 " config_hash=" + Hex16(StableHash(RenderScenario(cfg))) +
                                 " seed=" + std::to_string(seed) + "\n";
    WriteFile((dir / "manifest.txt").string(), manifest);
    std::cout << manifest;
}

void
CmdSweepRb(const std::vector<int>& mcs,
           const std::vector<int>& sizes,
           const std::vector<int>& intervals,
           int maxRbs,
           const std::string& out)
{
    for (int m : mcs)
    {
        if (m < 0 || m > 28)
        {
            throw UsageError("invalid mcs " + std::to_string(m) + " (expected 0..28)");
        }
    }
    for (int s : sizes)
    {
        if (s < 1)
        {
            throw UsageError("invalid size " + std::to_string(s));
        }
    }
    PrepareOutDir(out);
    const auto rows = RbSweep(mcs, sizes, intervals, maxRbs);
    WriteFile((fs::path(out) / "rb_sweep.csv").string(),
              Render([&](std::ostream& os) { WriteRbSweepCsv(os, rows); }));
}

void
CmdSweepPdr(const std::string& configPath,
            int nSeeds,
            const std::string& shadowing,
            bool serial,
            const std::string& out)
{
    ScenarioConfig base = LoadConfig(configPath);
    std::vector<bool> modes;
    if (shadowing != "on")
    {
        modes.push_back(false);
    }
    if (shadowing != "off")
    {
        modes.push_back(true);
    }
    const auto points = PdrSweepPoints(base, nSeeds, modes);
    for (const auto& p : points)
    {
        try
        {
            Validate(p);
        }
        catch (const ConfigError& e)
        {
            throw UsageError(e.what());
        }
    }
    PrepareOutDir(out);

    const auto runs = serial ? RunSweepSerial(points) : RunSweepParallel(points);
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < nSeeds; ++k)
    {
        seeds.push_back(base.seed + static_cast<std::uint64_t>(k));
    }
    const std::string id = SweepId(base, seeds);
    const fs::path dir(out);
    WriteFile((dir / "pdr_sweep.csv").string(),
              Render([&](std::ostream& os) { WritePdrSweepCsv(os, runs); }));
    WriteFile((dir / "platoon.csv").string(),
              Render([&](std::ostream& os) { WriteSweepPlatoonCsv(os, id, runs); }));
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"LTE-V sidelink platooning simulator"};
    app.require_subcommand(1);

    std::string configPath;
    std::uint64_t seed = 1;
    std::string out = ".";
    auto* run = app.add_subcommand("run", "Run one scenario and write pdr, layer and platoon CSVs");
    run->add_option("--config", configPath, "Scenario file (defaults built in when omitted)");
    run->add_option("--seed", seed, "Master seed")->capture_default_str();
    run->add_option("--out", out, "Output directory")->required();

    std::vector<int> mcs;
    std::vector<int> sizes;
    std::vector<int> intervals;
    int maxRbs = 100;
    auto* rb = app.add_subcommand("sweep-rb", "Minimum RBs per (mcs, size, interval)");
    rb->add_option("--mcs", mcs, "MCS list, comma separated")->required()->delimiter(',');
    rb->add_option("--sizes", sizes, "Packet sizes in bytes")->required()->delimiter(',');
    rb->add_option("--intervals", intervals, "Intervals in ms")->required()->delimiter(',');
    rb->add_option("--max-rbs", maxRbs, "Cap above which a point is infeasible")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    rb->add_option("--out", out, "Output directory")->required();

    int nSeeds = 1;
    std::string shadowing = "both";
    bool serial = false;
    auto* pdr = app.add_subcommand("sweep-pdr", "PDR and platoon length over seeds");
    pdr->add_option("--config", configPath, "Scenario file (defaults built in when omitted)");
    pdr->add_option("--seeds", nSeeds, "Number of seeds, starting at the config seed")
        ->required()
        ->check(CLI::PositiveNumber);
    pdr->add_option("--shadowing", shadowing, "on, off or both")
        ->capture_default_str()
        ->check(CLI::IsMember({"on", "off", "both"}));
    pdr->add_flag("--serial", serial, "Use the single-threaded reference path");
    pdr->add_option("--out", out, "Output directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try
    {
        if (run->parsed())
        {
            CmdRun(configPath, seed, out);
        }
        else if (rb->parsed())
        {
            CmdSweepRb(mcs, sizes, intervals, maxRbs, out);
        }
        else
        {
            CmdSweepPdr(configPath, nSeeds, shadowing, serial, out);
        }
    }
    catch (const UsageError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
