#include "ltev/config.h"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace ltev
{

namespace
{

std::string_view
Trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string
FormatDouble(double v)
{
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

template <typename T>
T
ParseNumber(std::string_view key, std::string_view value)
{
    T out{};
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    {
        throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
    }
    if constexpr (std::is_floating_point_v<T>)
    {
        if (!std::isfinite(out))
        {
            throw ConfigError("non-finite value for " + std::string(key));
        }
    }
    return out;
}

bool
ParseBool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "on" || value == "1" || value == "yes")
    {
        return true;
    }
    if (value == "false" || value == "off" || value == "0" || value == "no")
    {
        return false;
    }
    throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

template <typename E, std::size_t N>
E
ParseEnum(std::string_view key, std::string_view value, const std::array<E, N>& options)
{
    for (E e : options)
    {
        if (ToString(e) == value)
        {
            return e;
        }
    }
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

struct Field
{
    std::string_view key;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field
NumberField(std::string_view key, T ScenarioConfig::*member)
{
    return Field{
        key,
        [key, member](ScenarioConfig& c, std::string_view v) {
            c.*member = ParseNumber<T>(key, v);
        },
        [member](const ScenarioConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
            {
                return FormatDouble(c.*member);
            }
            else
            {
                return std::to_string(c.*member);
            }
        },
    };
}

template <typename E, std::size_t N>
Field
EnumField(std::string_view key, E ScenarioConfig::*member, std::array<E, N> options)
{
    return Field{
        key,
        [key, member, options](ScenarioConfig& c, std::string_view v) {
            c.*member = ParseEnum(key, v, options);
        },
        [member](const ScenarioConfig& c) { return ToString(c.*member); },
    };
}

const std::vector<Field>&
Fields()
{
    using C = ScenarioConfig;
    static const std::vector<Field> fields = {
        NumberField("n_vehicles", &C::n_vehicles),
        NumberField("inter_vehicle_gap_m", &C::inter_vehicle_gap_m),
        NumberField("vehicle_length_m", &C::vehicle_length_m),
        NumberField("speed_mps", &C::speed_mps),
        NumberField("sim_time_ms", &C::sim_time_ms),
        NumberField("app_packet_bytes", &C::app_packet_bytes),
        NumberField("app_interval_ms", &C::app_interval_ms),
        EnumField("traffic_pattern",
                  &C::traffic_pattern,
                  std::array{TrafficPattern::LEADER_BROADCAST, TrafficPattern::ALL_BROADCAST}),
        NumberField("mcs", &C::mcs),
        NumberField("n_rbs", &C::n_rbs),
        NumberField("tx_power_dbm", &C::tx_power_dbm),
        NumberField("noise_dbm", &C::noise_dbm),
        NumberField("antenna_height_m", &C::antenna_height_m),
        EnumField("pathloss_model",
                  &C::pathloss_model,
                  std::array{PathlossModel::WINNER_B1_LOS, PathlossModel::FREE_SPACE}),
        NumberField("carrier_ghz", &C::carrier_ghz),
        NumberField("sinr_margin_db", &C::sinr_margin_db),
        EnumField("decode_mode",
                  &C::decode_mode,
                  std::array{DecodeMode::DETERMINISTIC, DecodeMode::LOGISTIC}),
        NumberField("logistic_beta_db", &C::logistic_beta_db),
        NumberField("dmrs_symbols", &C::dmrs_symbols),
        Field{"shadowing_enabled",
              [](C& c, std::string_view v) { c.shadowing_enabled = ParseBool("shadowing_enabled", v); },
              [](const C& c) { return std::string(c.shadowing_enabled ? "true" : "false"); }},
        NumberField("shadow_sigma_db", &C::shadow_sigma_db),
        NumberField("d_cor_m", &C::d_cor_m),
        NumberField("shadow_block_ms", &C::shadow_block_ms),
        EnumField("grid_layout",
                  &C::grid_layout,
                  std::array{GridLayout::R12, GridLayout::R14, GridLayout::HYBRID}),
        NumberField("n_rb_total", &C::n_rb_total),
        NumberField("subchannel_size_rb", &C::subchannel_size_rb),
        NumberField("pscch_rb_per_subchannel", &C::pscch_rb_per_subchannel),
        NumberField("pscch_pool_start_rb", &C::pscch_pool_start_rb),
        NumberField("pscch_pool_rb", &C::pscch_pool_rb),
        NumberField("pssch_pool_start_rb", &C::pssch_pool_start_rb),
        NumberField("sps_sensing_window_ms", &C::sps_sensing_window_ms),
        NumberField("sps_rsrp_threshold_dbm", &C::sps_rsrp_threshold_dbm),
        NumberField("sps_keep_probability", &C::sps_keep_probability),
        NumberField("selection_window_t1_ms", &C::selection_window_t1_ms),
        NumberField("selection_window_t2_ms", &C::selection_window_t2_ms),
        NumberField("t_reordering_ms", &C::t_reordering_ms),
        NumberField("hdr_transport_bytes", &C::hdr_transport_bytes),
        NumberField("hdr_network_bytes", &C::hdr_network_bytes),
        NumberField("hdr_pdcp_bytes", &C::hdr_pdcp_bytes),
        NumberField("hdr_rlc_bytes", &C::hdr_rlc_bytes),
        NumberField("hdr_mac_bytes", &C::hdr_mac_bytes),
        NumberField("seed", &C::seed),
        EnumField("mobility_source",
                  &C::mobility_source,
                  std::array{MobilitySource::PLATOON_MODEL, MobilitySource::NS2_TRACE}),
        Field{"trace_path",
              [](C& c, std::string_view v) {
                  c.trace_path = v.empty() ? std::nullopt : std::optional<std::string>(v);
              },
              [](const C& c) { return c.trace_path.value_or(""); }},
    };
    return fields;
}

void
Require(bool ok, const char* field, const std::string& rule)
{
    if (!ok)
    {
        throw ConfigError(std::string(field) + ": " + rule);
    }
}

} // namespace

ScenarioConfig
DefaultScenario()
{
    return ScenarioConfig{};
}

void
Validate(const ScenarioConfig& c)
{
    Require(c.n_vehicles >= 2, "n_vehicles", "must be >= 2");
    Require(c.inter_vehicle_gap_m > 0, "inter_vehicle_gap_m", "must be > 0");
    Require(c.vehicle_length_m >= 0, "vehicle_length_m", "must be >= 0");
    Require(c.speed_mps >= 0, "speed_mps", "must be >= 0");
    Require(c.sim_time_ms > 0, "sim_time_ms", "must be > 0");
    Require(c.app_packet_bytes >= 1, "app_packet_bytes", "must be >= 1");
    Require(c.app_interval_ms >= 1, "app_interval_ms", "must be >= 1");
    Require(c.mcs >= 0 && c.mcs <= 28, "mcs", "must be in 0..28");
    Require(c.n_rbs >= 1, "n_rbs", "must be >= 1");
    Require(c.carrier_ghz > 0, "carrier_ghz", "must be > 0");
    Require(c.logistic_beta_db > 0, "logistic_beta_db", "must be > 0");
    Require(c.dmrs_symbols >= 2 && c.dmrs_symbols <= 4, "dmrs_symbols", "must be in 2..4");
    Require(c.shadow_sigma_db >= 0, "shadow_sigma_db", "must be >= 0");
    Require(c.d_cor_m > 0, "d_cor_m", "must be > 0");
    Require(c.shadow_block_ms >= 1, "shadow_block_ms", "must be a whole number of subframes >= 1");
    Require(c.n_rb_total >= 1, "n_rb_total", "must be >= 1");
    Require(c.subchannel_size_rb >= 1, "subchannel_size_rb", "must be >= 1");
    Require(c.pscch_rb_per_subchannel >= 0, "pscch_rb_per_subchannel", "must be >= 0");
    Require(c.pscch_pool_start_rb >= 0, "pscch_pool_start_rb", "must be >= 0");
    Require(c.pscch_pool_rb >= 0, "pscch_pool_rb", "must be >= 0");
    Require(c.pssch_pool_start_rb >= 0, "pssch_pool_start_rb", "must be >= 0");
    Require(c.sps_sensing_window_ms >= 1, "sps_sensing_window_ms", "must be >= 1");
    Require(c.sps_keep_probability >= 0 && c.sps_keep_probability <= 0.8,
            "sps_keep_probability",
            "must be in [0, 0.8]");
    Require(c.selection_window_t1_ms >= 1, "selection_window_t1_ms", "must be >= 1");
    Require(c.selection_window_t2_ms >= 0, "selection_window_t2_ms", "must be >= 0");
    Require(c.SelectionWindowEnd() >= c.selection_window_t1_ms,
            "selection_window_t2_ms",
            "selection window end precedes its start");
    Require(c.t_reordering_ms >= 0, "t_reordering_ms", "must be >= 0");
    Require(c.hdr_transport_bytes >= 0, "hdr_transport_bytes", "must be >= 0");
    Require(c.hdr_network_bytes >= 0, "hdr_network_bytes", "must be >= 0");
    Require(c.hdr_pdcp_bytes >= 0, "hdr_pdcp_bytes", "must be >= 0");
    Require(c.hdr_rlc_bytes >= 0, "hdr_rlc_bytes", "must be >= 0");
    Require(c.hdr_mac_bytes >= 0, "hdr_mac_bytes", "must be >= 0");
    Require(c.mobility_source != MobilitySource::NS2_TRACE || c.trace_path.has_value(),
            "trace_path",
            "required when mobility_source = NS2_TRACE");
}

ScenarioConfig
ParseScenario(std::string_view text)
{
    ScenarioConfig cfg = DefaultScenario();
    std::set<std::string, std::less<>> seen;
    int lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
        {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineNo;

        if (auto hash = line.find('#'); hash != std::string_view::npos)
        {
            line = line.substr(0, hash);
        }
        line = Trim(line);
        if (line.empty())
        {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw ConfigError("expected 'key = value'", lineNo);
        }
        auto key = Trim(line.substr(0, eq));
        auto value = Trim(line.substr(eq + 1));
        if (key.empty())
        {
            throw ConfigError("missing key", lineNo);
        }
        const auto& fields = Fields();
        auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) {
            return f.key == key;
        });
        if (it == fields.end())
        {
            throw ConfigError("unknown key '" + std::string(key) + "'", lineNo);
        }
        if (!seen.emplace(key).second)
        {
            throw ConfigError("duplicate key '" + std::string(key) + "'", lineNo);
        }
        try
        {
            it->set(cfg, value);
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(e.what(), lineNo);
        }
    }
    Validate(cfg);
    return cfg;
}

ScenarioConfig
LoadScenarioFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ParseScenario(ss.str());
}

std::string
RenderScenario(const ScenarioConfig& cfg)
{
    std::string out;
    for (const auto& f : Fields())
    {
        out.append(f.key);
        out.append(" = ");
        out.append(f.get(cfg));
        out.push_back('\n');
    }
    return out;
}

std::uint64_t
StableHash(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string
ScenarioId(const ScenarioConfig& cfg, std::uint64_t seed)
{
    ScenarioConfig c = cfg;
    c.seed = seed;
    char buf[17];
    std::snprintf(buf,
                  sizeof(buf),
                  "%016llx",
                  static_cast<unsigned long long>(StableHash(RenderScenario(c))));
    return std::string(buf, 12);
}

std::string
ToString(GridLayout v)
{
    switch (v)
    {
    case GridLayout::R12:
        return "R12";
    case GridLayout::R14:
        return "R14";
    case GridLayout::HYBRID:
        return "HYBRID";
    }
    return "?";
}

std::string
ToString(TrafficPattern v)
{
    return v == TrafficPattern::LEADER_BROADCAST ? "LEADER_BROADCAST" : "ALL_BROADCAST";
}

std::string
ToString(MobilitySource v)
{
    return v == MobilitySource::PLATOON_MODEL ? "PLATOON_MODEL" : "NS2_TRACE";
}

std::string
ToString(PathlossModel v)
{
    return v == PathlossModel::WINNER_B1_LOS ? "WINNER_B1_LOS" : "FREE_SPACE";
}

std::string
ToString(DecodeMode v)
{
    return v == DecodeMode::DETERMINISTIC ? "DETERMINISTIC" : "LOGISTIC";
}

} // namespace ltev
