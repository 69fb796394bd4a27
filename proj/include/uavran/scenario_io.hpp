#pragma once

#include "uavran/energy_models.hpp"
#include "uavran/network_design.hpp"
#include "uavran/radio_link.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace uavran {

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kSeasonCount = 4;

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD; nullopt when malformed or not a calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);
/// 1-based ordinal day within the year.
int day_of_year(const Date& date);

struct Area {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 3000.0;
    double y_max = 3000.0;
};

struct NodeSpec {
    int id = 0;
    Position position;
    UavAirframe airframe;
    MimoSpec mimo;
    RisSpec ris;
    PvSpec pv;
    BatterySpec battery;
};

struct SeasonDay {
    std::string name;
    Date date;
    double temp_min_c = 0.0;
    double temp_max_c = 0.0;
};

struct Scenario {
    Area area;
    double node_altitude_m = 50.0;
    std::vector<NodeSpec> nodes;
    int user_count = 100;
    double user_height_m = 1.5;
    LinkDemand demand;
    RadioParams radio;
    int run_count = 10;
    std::vector<SeasonDay> seasons;
    double latitude_deg = 52.41;
    double cloud_factor = 0.7;
    /// Fraction of the clear-sky level that random cloud cover may remove per 10-minute block.
    double cloud_variability = 0.0;
};

/// Spring equinox, summer solstice, autumn equinox, winter solstice of 2022.
std::vector<SeasonDay> default_seasons();

/// Nine stations on a regular 3x3 grid over the default 3 km x 3 km area.
std::vector<NodeSpec> default_node_layout(const Area& area, double altitude_m);

/// Default scenario, identical to loading an empty JSON object.
Scenario default_scenario();

/// Throws ConfigError naming the offending key.
void validate(const Scenario& scenario);

/// Strict JSON config reader: unknown keys are rejected, every default may be overridden.
Scenario load_config(const std::filesystem::path& path);
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

/**
 * Small cell-activation instance for the exhaustive oracle: `nodes` and
 * `users` arrays of {id, x, y[, z]}, plus optional node_altitude_m,
 * user_height_m, dl_demand_mbps, ul_demand_mbps, radio and mimo blocks.
 */
DesignInput instance_from_json(const nlohmann::json& doc);
DesignInput load_instance(const std::filesystem::path& path);

/**
 * Deterministic generator used for user placement, shadowing and cloud noise:
 * std::mt19937_64 seeded with the 64-bit seed; a uniform double in [0,1)
 * is the top 53 bits of one output scaled by 2^-53.
 */
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Standard normal via Box-Muller, consuming two uniforms.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Users 0..user_count-1, uniform over the area at the configured ground height.
std::vector<User> place_users(const Scenario& scenario, std::uint64_t seed);

struct WeatherSample {
    int minute_index = 0;
    double ghi_wm2 = 0.0;
    double ambient_c = 0.0;
};

/// Consecutive whole days at one-minute cadence; minute_index counts from the first day.
struct WeatherSeries {
    std::vector<Date> days;
    std::vector<WeatherSample> samples;
};

/// Throws ConfigError listing missing or unexpected minutes when the series is not complete for `dates`.
void check_weather_coverage(const WeatherSeries& series, const std::vector<Date>& dates);

/// CSV with header `timestamp,ghi_wm2,temp_c`; errors carry the 1-based line number.
WeatherSeries load_weather_csv(const std::filesystem::path& path);
WeatherSeries read_weather_csv(std::istream& in);
void write_weather_csv(const WeatherSeries& series, std::ostream& out);

struct ClearSkyDay {
    Date date;
    double latitude_deg = 52.41;
    double cloud_factor = 0.7;
    double cloud_variability = 0.0;
    double temp_min_c = 0.0;
    double temp_max_c = 10.0;
};

inline constexpr double kSolarConstantWm2 = 1361.0;
inline constexpr double kClearSkyTransmittance = 0.75;

double solar_declination_deg(int day_of_year);
/// Solar elevation for local apparent solar time in hours.
double solar_elevation_deg(double latitude_deg, double declination_deg, double solar_hour);
double clear_sky_ghi(double elevation_deg);

/// One day of synthetic weather; minute m is local apparent solar time m/60 h.
WeatherSeries synth_day(const ClearSkyDay& day, std::uint64_t seed);

/// Synthetic weather for one configured season day.
WeatherSeries synth_weather(const Scenario& scenario, std::size_t season_index, double cloud_factor,
                            std::uint64_t seed);

/// All configured season days back to back.
WeatherSeries synth_study_weather(const Scenario& scenario, std::uint64_t seed);

} // namespace uavran
