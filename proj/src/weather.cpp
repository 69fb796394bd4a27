#include "uavran/errors.hpp"
#include "uavran/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

namespace uavran {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr int kCloudBlockMinutes = 10;

struct Timestamp {
    Date date;
    int minute = 0; // minute of day
};

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM[:00]
    if (text.size() != 16 && text.size() != 19) return std::nullopt;
    if (text[10] != 'T' || text[13] != ':') return std::nullopt;
    const auto date = parse_date(text.substr(0, 10));
    if (!date) return std::nullopt;
    auto two = [&](std::size_t pos) -> std::optional<int> {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + 2, v);
        if (ec != std::errc{} || ptr != text.data() + pos + 2) return std::nullopt;
        return v;
    };
    const auto hh = two(11);
    const auto mm = two(14);
    if (!hh || !mm || *hh > 23 || *mm > 59) return std::nullopt;
    if (text.size() == 19) {
        const auto ss = two(17);
        if (text[16] != ':' || !ss || *ss != 0) return std::nullopt;
    }
    return Timestamp{*date, *hh * 60 + *mm};
}

std::optional<double> parse_number(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string clock(int minute_of_day) { return fmt::format("{:02d}:{:02d}", minute_of_day / 60, minute_of_day % 60); }

std::string describe_minutes(const Date& date, int first, int last) {
    if (first == last) return fmt::format("{}T{}", format_date(date), clock(first));
    return fmt::format("{}T{}..{}", format_date(date), clock(first), clock(last));
}

} // namespace

void check_weather_coverage(const WeatherSeries& series, const std::vector<Date>& dates) {
    if (series.days != dates) {
        std::string have;
        for (const auto& d : series.days) have += (have.empty() ? "" : ",") + format_date(d);
        std::string want;
        for (const auto& d : dates) want += (want.empty() ? "" : ",") + format_date(d);
        throw ConfigError(fmt::format("weather days [{}] do not match scenario dates [{}]", have, want));
    }
    const int expected = static_cast<int>(dates.size()) * kMinutesPerDay;
    std::vector<bool> present(static_cast<std::size_t>(expected), false);
    bool ordered = true;
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const int m = series.samples[i].minute_index;
        if (i > 0 && m <= series.samples[i - 1].minute_index) ordered = false;
        if (m < 0 || m >= expected) {
            throw ConfigError(fmt::format("weather sample {} has minute index {} outside the study", i, m));
        }
        present[static_cast<std::size_t>(m)] = true;
    }
    if (!ordered) throw ConfigError("weather minute indices are not strictly increasing");

    std::vector<std::string> gaps;
    for (int m = 0; m < expected;) {
        if (present[static_cast<std::size_t>(m)]) {
            ++m;
            continue;
        }
        int end = m;
        while (end + 1 < expected && !present[static_cast<std::size_t>(end + 1)] &&
               (end + 1) / kMinutesPerDay == m / kMinutesPerDay) {
            ++end;
        }
        gaps.push_back(describe_minutes(dates[static_cast<std::size_t>(m / kMinutesPerDay)], m % kMinutesPerDay,
                                        end % kMinutesPerDay));
        m = end + 1;
    }
    if (!gaps.empty()) {
        std::string list;
        for (const auto& g : gaps) list += (list.empty() ? "" : ", ") + g;
        throw ConfigError("weather series is missing minutes: " + list);
    }
}

WeatherSeries read_weather_csv(std::istream& in) {
    WeatherSeries series;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) { throw ConfigError(fmt::format("weather CSV line {}: {}", line_no, msg)); };

    if (!std::getline(in, line)) throw ConfigError("weather CSV is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,ghi_wm2,temp_c") fail("header must be 'timestamp,ghi_wm2,temp_c'");

    int prev_minute = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) fail("expected 3 fields");
        const std::string_view view(line);
        const auto ts = parse_timestamp(view.substr(0, c1));
        if (!ts) fail(fmt::format("bad timestamp '{}'", view.substr(0, c1)));
        const auto ghi = parse_number(view.substr(c1 + 1, c2 - c1 - 1));
        const auto temp = parse_number(view.substr(c2 + 1));
        if (!ghi || !temp) fail("ghi_wm2 and temp_c must be finite numbers");
        if (*ghi < 0.0) fail(fmt::format("negative ghi_wm2 {}", *ghi));

        if (series.days.empty() || ts->date != series.days.back()) {
            if (!series.days.empty()) {
                if (prev_minute != kMinutesPerDay - 1) {
                    fail("gap: missing " + describe_minutes(series.days.back(), prev_minute + 1, kMinutesPerDay - 1));
                }
                if (std::chrono::sys_days{ts->date} <= std::chrono::sys_days{series.days.back()}) {
                    fail(fmt::format("day {} is out of order", format_date(ts->date)));
                }
            }
            if (ts->minute != 0) fail("gap: missing " + describe_minutes(ts->date, 0, ts->minute - 1));
            series.days.push_back(ts->date);
        } else if (ts->minute <= prev_minute) {
            fail(fmt::format("duplicate or out-of-order minute {}", describe_minutes(ts->date, ts->minute, ts->minute)));
        } else if (ts->minute != prev_minute + 1) {
            fail("gap: missing " + describe_minutes(ts->date, prev_minute + 1, ts->minute - 1));
        }
        prev_minute = ts->minute;
        const int day_index = static_cast<int>(series.days.size()) - 1;
        series.samples.push_back({day_index * kMinutesPerDay + ts->minute, *ghi, *temp});
    }
    if (series.days.empty()) throw ConfigError("weather CSV has no data rows");
    if (prev_minute != kMinutesPerDay - 1) {
        throw ConfigError("weather CSV ends early: missing " +
                          describe_minutes(series.days.back(), prev_minute + 1, kMinutesPerDay - 1));
    }
    return series;
}

WeatherSeries load_weather_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open weather file '{}'", path.string()));
    return read_weather_csv(in);
}

void write_weather_csv(const WeatherSeries& series, std::ostream& out) {
    out << "timestamp,ghi_wm2,temp_c\n";
    for (const auto& s : series.samples) {
        const auto day = static_cast<std::size_t>(s.minute_index / kMinutesPerDay);
        const int minute = s.minute_index % kMinutesPerDay;
        out << fmt::format("{}T{}:00,{},{}\n", format_date(series.days.at(day)), clock(minute), s.ghi_wm2,
                           s.ambient_c);
    }
}

double solar_declination_deg(int day_of_year) {
    return 23.45 * std::sin(2.0 * std::numbers::pi * (284.0 + day_of_year) / 365.0);
}

double solar_elevation_deg(double latitude_deg, double declination_deg, double solar_hour) {
    const double hour_angle = 15.0 * (solar_hour - 12.0) * kDeg;
    const double lat = latitude_deg * kDeg;
    const double dec = declination_deg * kDeg;
    const double s = std::sin(lat) * std::sin(dec) + std::cos(lat) * std::cos(dec) * std::cos(hour_angle);
    return std::asin(std::clamp(s, -1.0, 1.0)) / kDeg;
}

double clear_sky_ghi(double elevation_deg) {
    if (elevation_deg <= 0.0) return 0.0;
    const double s = std::sin(elevation_deg * kDeg);
    return kSolarConstantWm2 * std::pow(kClearSkyTransmittance, 1.0 / s) * s;
}

WeatherSeries synth_day(const ClearSkyDay& day, std::uint64_t seed) {
    WeatherSeries series;
    series.days.push_back(day.date);
    series.samples.reserve(kMinutesPerDay);
    SeededRng rng(seed);
    const double declination = solar_declination_deg(day_of_year(day.date));
    const double mid = 0.5 * (day.temp_min_c + day.temp_max_c);
    const double amplitude = 0.5 * (day.temp_max_c - day.temp_min_c);
    double clearness = day.cloud_factor;
    for (int m = 0; m < kMinutesPerDay; ++m) {
        if (m % kCloudBlockMinutes == 0) clearness = day.cloud_factor * (1.0 - day.cloud_variability * rng.uniform());
        const double hour = m / 60.0;
        const double ghi = clear_sky_ghi(solar_elevation_deg(day.latitude_deg, declination, hour)) * clearness;
        // coldest at 04:00, warmest at 16:00 solar time
        const double temp = mid - amplitude * std::cos(2.0 * std::numbers::pi * (hour - 4.0) / 24.0);
        series.samples.push_back({m, ghi, temp});
    }
    return series;
}

WeatherSeries synth_weather(const Scenario& scenario, std::size_t season_index, double cloud_factor,
                            std::uint64_t seed) {
    const auto& season = scenario.seasons.at(season_index);
    ClearSkyDay day;
    day.date = season.date;
    day.latitude_deg = scenario.latitude_deg;
    day.cloud_factor = cloud_factor;
    day.cloud_variability = scenario.cloud_variability;
    day.temp_min_c = season.temp_min_c;
    day.temp_max_c = season.temp_max_c;
    // one stream per season so the days stay independent of their order
    return synth_day(day, seed * 4 + season_index);
}

WeatherSeries synth_study_weather(const Scenario& scenario, std::uint64_t seed) {
    WeatherSeries all;
    for (std::size_t i = 0; i < scenario.seasons.size(); ++i) {
        auto day = synth_weather(scenario, i, scenario.cloud_factor, seed);
        for (auto& s : day.samples) {
            s.minute_index += static_cast<int>(i) * kMinutesPerDay;
            all.samples.push_back(s);
        }
        all.days.push_back(day.days.front());
    }
    return all;
}

} // namespace uavran
