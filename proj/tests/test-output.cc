#include "ltev/csv-output.h"

#include "doctest.h"

#include <algorithm>
#include <sstream>

using namespace ltev;

namespace
{

int
Lines(const std::string& s)
{
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("number formatting uses six significant digits")
{
    CHECK(FormatNumber(1.0) == "1");
    CHECK(FormatNumber(0.995556) == "0.995556");
    CHECK(FormatNumber(2240.0 / 2250.0) == "0.995556");
    CHECK(FormatNumber(28.8) == "28.8");
    CHECK(FormatNumber(123456789.0) == "1.23457e+08");
    CHECK(FormatNumber(0.0) == "0");
}

TEST_CASE("rb sweep rows")
{
    const auto rows = RbSweep({4, 20}, {72}, {20}, 100);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].mcs == 4);
    CHECK(rows[0].min_rbs == 11);
    CHECK(rows[1].mcs == 20);
    CHECK(rows[1].min_rbs == 3);

    const auto big = RbSweep({16}, {160}, {10, 20}, 100);
    REQUIRE(big.size() == 2);
    CHECK(big[0].min_rbs == 6);
    CHECK(big[1].interval_ms == 20);

    std::ostringstream os;
    WriteRbSweepCsv(os, RbSweep({0}, {1500}, {100}, 100));
    CHECK(os.str() == "mcs,size_bytes,interval_ms,min_rbs\n0,1500,100,infeasible\n");

    const auto mono = RbSweep({7}, {10, 50, 100, 200, 400, 800}, {20}, 1000);
    for (std::size_t i = 1; i < mono.size(); ++i)
    {
        CHECK(mono[i].min_rbs >= mono[i - 1].min_rbs);
    }
    CHECK_THROWS(RbSweep({29}, {72}, {20}, 100));
}

TEST_CASE("run CSVs have the documented schemas")
{
    auto cfg = DefaultScenario();
    cfg.sim_time_ms = 2000;
    const auto run = RunScenario(cfg);

    std::ostringstream pdr;
    WritePdrCsv(pdr, run);
    CHECK(pdr.str().rfind("scenario_id,vehicle,tx,rx,pdr\n", 0) == 0);
    CHECK(Lines(pdr.str()) == 1 + 8);
    CHECK(pdr.str().find('"') == std::string::npos);

    std::ostringstream layers;
    WriteLayerCsv(layers, run);
    CHECK(layers.str().rfind(
              "scenario_id,vehicle,layer,mean_delay_ms,p95_delay_ms,throughput_kbps\n", 0) == 0);
    CHECK(layers.str().find(",app,") != std::string::npos);

    std::ostringstream plat;
    WriteRunPlatoonCsv(plat, run);
    const std::string id = ScenarioId(cfg, cfg.seed);
    CHECK(plat.str() == "scenario_id,shadowing,level,length\n" + id + ",on,L1_L2," +
                            std::to_string(run.length_l1_l2) + "\n" + id + ",on,L3_L5," +
                            std::to_string(run.length_l3_l5) + "\n");
}

TEST_CASE("parallel sweep matches the serial reference")
{
    auto base = DefaultScenario();
    base.sim_time_ms = 3000;
    base.mcs = 4;
    base.n_rbs = 24;
    const auto points = PdrSweepPoints(base, 3, {false, true});
    REQUIRE(points.size() == 6);
    CHECK(points[0].seed == 1);
    CHECK(points[2].seed == 3);
    CHECK_FALSE(points[0].shadowing_enabled);
    CHECK(points[3].shadowing_enabled);

    const auto serial = RunSweepSerial(points);
    const auto parallel = RunSweepParallel(points);
    std::ostringstream a;
    std::ostringstream b;
    WritePdrSweepCsv(a, serial);
    WritePdrSweepCsv(b, parallel);
    CHECK(a.str() == b.str());
    CHECK(Lines(a.str()) == 1 + 6 * 8);

    // row order does not depend on run order
    std::vector<RunSummary> reversed(serial.rbegin(), serial.rend());
    std::ostringstream c;
    WritePdrSweepCsv(c, reversed);
    CHECK(c.str() == a.str());

    const auto means = MeanPlatoonLengths(serial);
    REQUIRE(means.size() == 4);
    CHECK_FALSE(means[0].shadowing);
    CHECK(means[0].level == AutomationLevel::L1_L2);
    CHECK(means[3].shadowing);
    CHECK(means[3].level == AutomationLevel::L3_L5);

    std::ostringstream p;
    const std::string id = SweepId(base, {1, 2, 3});
    WriteSweepPlatoonCsv(p, id, serial);
    CHECK(Lines(p.str()) == 5);
    CHECK(id.size() == 12);
    CHECK(id != SweepId(base, {1, 2}));
}

TEST_CASE("sweep errors surface from worker threads")
{
    auto bad = DefaultScenario();
    bad.n_rbs = 40;
    CHECK_THROWS_AS(RunSweepParallel({DefaultScenario(), bad}), ConfigError);
}
