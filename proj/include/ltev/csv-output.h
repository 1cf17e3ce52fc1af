#ifndef LTEV_CSV_OUTPUT_H
#define LTEV_CSV_OUTPUT_H

#include "ltev/sweep.h"

#include <iosfwd>
#include <string>
#include <vector>

namespace ltev
{

/// Six significant digits, '.' decimal point, no locale.
std::string FormatNumber(double v);

struct RbSweepRow
{
    int mcs;
    int size_bytes;
    int interval_ms;
    int min_rbs; ///< -1 when the requirement exceeds the cap
};

/// One row per (mcs, size, interval) in list order. Throws for an invalid mcs.
std::vector<RbSweepRow> RbSweep(const std::vector<int>& mcs,
                                const std::vector<int>& sizes,
                                const std::vector<int>& intervals,
                                int maxRbs);

void WritePdrCsv(std::ostream& os, const RunSummary& run);
void WriteLayerCsv(std::ostream& os, const RunSummary& run);
void WriteRunPlatoonCsv(std::ostream& os, const RunSummary& run);
void WriteRbSweepCsv(std::ostream& os, const std::vector<RbSweepRow>& rows);

/// Rows sorted by (shadowing, seed, vehicle) regardless of run order.
void WritePdrSweepCsv(std::ostream& os, std::vector<RunSummary> runs);

/// Mean lengths of a sweep, all rows tagged with sweepId.
void WriteSweepPlatoonCsv(std::ostream& os, const std::string& sweepId,
                          const std::vector<RunSummary>& runs);

/// Identifier of a sweep: hash of the base config and the seed list.
std::string SweepId(const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds);

/// Writes text to path, throwing std::runtime_error on IO failure.
void WriteFile(const std::string& path, const std::string& text);

} // namespace ltev

#endif /* LTEV_CSV_OUTPUT_H */
