#ifndef LTEV_CONFIG_H
#define LTEV_CONFIG_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ltev
{

enum class GridLayout
{
    R12,
    R14,
    HYBRID,
};

enum class TrafficPattern
{
    LEADER_BROADCAST,
    ALL_BROADCAST,
};

enum class MobilitySource
{
    PLATOON_MODEL,
    NS2_TRACE,
};

enum class PathlossModel
{
    WINNER_B1_LOS,
    FREE_SPACE,
};

enum class DecodeMode
{
    DETERMINISTIC,
    LOGISTIC,
};

/**
 * Raised for malformed scenario documents and invariant violations.
 * Line is 0 when the problem is not tied to a particular line.
 */
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          m_line(line)
    {
    }

    int Line() const
    {
        return m_line;
    }

  private:
    int m_line;
};

/**
 * Every tunable of a scenario run. Field names double as the keys of the
 * INI-style scenario file.
 */
struct ScenarioConfig
{
    // platoon geometry and timing
    int n_vehicles{9};
    double inter_vehicle_gap_m{5.0};
    double vehicle_length_m{4.0};
    double speed_mps{14.0};
    std::int64_t sim_time_ms{45000};

    // application profile
    int app_packet_bytes{72};
    int app_interval_ms{20};
    TrafficPattern traffic_pattern{TrafficPattern::LEADER_BROADCAST};

    // link
    int mcs{20};
    int n_rbs{4};
    double tx_power_dbm{-25.0};
    double noise_dbm{-116.0};
    double antenna_height_m{1.5};
    PathlossModel pathloss_model{PathlossModel::WINNER_B1_LOS};
    double carrier_ghz{5.9};
    double sinr_margin_db{3.0};
    DecodeMode decode_mode{DecodeMode::DETERMINISTIC};
    double logistic_beta_db{0.5};
    int dmrs_symbols{4};

    // shadowing
    bool shadowing_enabled{true};
    double shadow_sigma_db{3.0};
    double d_cor_m{25.0};
    int shadow_block_ms{100};

    // resource grid
    GridLayout grid_layout{GridLayout::HYBRID};
    int n_rb_total{50};
    int subchannel_size_rb{10};
    int pscch_rb_per_subchannel{2};
    int pscch_pool_start_rb{0};
    int pscch_pool_rb{10};
    int pssch_pool_start_rb{10};

    // SPS
    int sps_sensing_window_ms{1000};
    double sps_rsrp_threshold_dbm{-110.0};
    double sps_keep_probability{0.0};
    int selection_window_t1_ms{1};
    int selection_window_t2_ms{0}; ///< 0 means "app_interval_ms"

    // stack
    int t_reordering_ms{25};
    int hdr_transport_bytes{8};
    int hdr_network_bytes{20};
    int hdr_pdcp_bytes{2};
    int hdr_rlc_bytes{1};
    int hdr_mac_bytes{2};

    std::uint64_t seed{1};
    MobilitySource mobility_source{MobilitySource::PLATOON_MODEL};
    std::optional<std::string> trace_path;

    /// Sum of all per-layer header bytes between APP and MAC.
    int StackOverheadBytes() const
    {
        return hdr_transport_bytes + hdr_network_bytes + hdr_pdcp_bytes + hdr_rlc_bytes +
               hdr_mac_bytes;
    }

    int SelectionWindowEnd() const
    {
        return selection_window_t2_ms > 0 ? selection_window_t2_ms : app_interval_ms;
    }

    bool operator==(const ScenarioConfig&) const = default;
};

/// Defaults taken from the platooning parameter table.
ScenarioConfig DefaultScenario();

/// Throws ConfigError naming the first offending field.
void Validate(const ScenarioConfig& cfg);

/**
 * Parse a flat key=value document. Missing keys keep their default; unknown
 * keys, duplicate keys and syntax errors are rejected with the line number.
 */
ScenarioConfig ParseScenario(std::string_view text);

/// Read and parse a scenario file. Throws std::runtime_error if unreadable.
ScenarioConfig LoadScenarioFile(const std::string& path);

/// Canonical text form; ParseScenario(RenderScenario(c)) == c.
std::string RenderScenario(const ScenarioConfig& cfg);

/// Stable 64-bit FNV-1a hash.
std::uint64_t StableHash(std::string_view bytes);

/// First 12 hex characters of the stable hash of (config, seed).
std::string ScenarioId(const ScenarioConfig& cfg, std::uint64_t seed);

std::string ToString(GridLayout v);
std::string ToString(TrafficPattern v);
std::string ToString(MobilitySource v);
std::string ToString(PathlossModel v);
std::string ToString(DecodeMode v);

} // namespace ltev

#endif /* LTEV_CONFIG_H */
