#include "uavran/scenario_io.hpp"

#include "uavran/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <fmt/format.h>

namespace uavran {

using nlohmann::json;

namespace {

/// Reads typed fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(fmt::format("{} must be an object", label()));
    }

    template <typename T>
    void read(const char* key, T& out) {
        const auto it = obj_.find(key);
        seen_.insert(key);
        if (it == obj_.end()) return;
        try {
            if constexpr (std::is_integral_v<T>) {
                if (!it->is_number_integer()) throw ConfigError("");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!it->is_number()) throw ConfigError("");
            }
            out = it->template get<T>();
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("{}: wrong type (expected {})", key_path(key), type_name<T>()));
        }
        if constexpr (std::is_floating_point_v<T>) {
            if (!std::isfinite(out)) throw ConfigError(fmt::format("{}: must be finite", key_path(key)));
        }
    }

    [[nodiscard]] const json* child(const char* key) {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.contains(key)) throw ConfigError(fmt::format("{}: unknown key", key_path(key)));
        }
    }

    [[nodiscard]] std::string key_path(std::string_view key) const {
        return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
    }

private:
    template <typename T>
    static const char* type_name() {
        if constexpr (std::is_same_v<T, bool>) return "boolean";
        else if constexpr (std::is_integral_v<T>) return "integer";
        else if constexpr (std::is_floating_point_v<T>) return "number";
        else if constexpr (std::is_same_v<T, std::string>) return "string";
        else return "array";
    }
    [[nodiscard]] std::string label() const { return path_.empty() ? std::string("config") : path_; }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_airframe(const json& j, const std::string& path, UavAirframe& a) {
    ObjectReader r(j, path);
    r.read("total_mass_kg", a.total_mass_kg);
    r.read("rotor_count", a.rotor_count);
    r.read("rotor_radius_m", a.rotor_radius_m);
    r.read("air_density", a.air_density);
    r.read("drive_efficiency", a.drive_efficiency);
    r.read("tether_efficiency", a.tether_efficiency);
    r.finish();
}

void read_mimo(const json& j, const std::string& path, MimoSpec& m) {
    ObjectReader r(j, path);
    r.read("antenna_count", m.antenna_count);
    r.read("carrier_freq_mhz", m.carrier_freq_mhz);
    r.read("fixed_power_w", m.fixed_power_w);
    r.read("per_antenna_circuit_power_w", m.per_antenna_circuit_power_w);
    r.read("per_user_processing_power_w", m.per_user_processing_power_w);
    r.read("pa_efficiency", m.pa_efficiency);
    r.read("max_tx_power_dbm", m.max_tx_power_dbm);
    r.read("sleep_power_w", m.sleep_power_w);
    r.finish();
}

void read_ris(const json& j, const std::string& path, RisSpec& s) {
    ObjectReader r(j, path);
    r.read("element_count", s.element_count);
    r.read("phase_bits", s.phase_bits);
    if (const json* table = r.child("per_element_power_w")) {
        if (!table->is_object()) throw ConfigError(path + ".per_element_power_w: must be an object");
        s.per_element_power_w.clear();
        for (const auto& [key, value] : table->items()) {
            int bits = 0;
            const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), bits);
            if (ec != std::errc{} || ptr != key.data() + key.size() || !value.is_number()) {
                throw ConfigError(fmt::format("{}.per_element_power_w.{}: expected integer bits -> number", path, key));
            }
            s.per_element_power_w[bits] = value.get<double>();
        }
    }
    r.finish();
}

void read_pv(const json& j, const std::string& path, PvSpec& p) {
    ObjectReader r(j, path);
    r.read("rated_power_w", p.rated_power_w);
    r.read("derating_factor", p.derating_factor);
    r.read("temp_coeff_per_c", p.temp_coeff_per_c);
    r.read("noct_c", p.noct_c);
    r.read("stc_irradiance_wm2", p.stc_irradiance_wm2);
    r.read("stc_cell_temp_c", p.stc_cell_temp_c);
    r.finish();
}

void read_battery(const json& j, const std::string& path, BatterySpec& b) {
    ObjectReader r(j, path);
    r.read("capacity_wh", b.capacity_wh);
    r.read("charge_efficiency", b.charge_efficiency);
    r.read("flight_reserve", b.flight_reserve);
    r.finish();
}

void read_radio(const json& j, RadioParams& p) {
    ObjectReader r(j, "radio");
    r.read("pathloss_exponent", p.pathloss_exponent);
    r.read("reference_loss_at_1m_db", p.reference_loss_at_1m_db);
    r.read("bandwidth_mhz", p.bandwidth_mhz);
    r.read("prb_bandwidth_khz", p.prb_bandwidth_khz);
    r.read("total_prbs", p.total_prbs);
    r.read("noise_figure_db", p.noise_figure_db);
    r.read("antenna_gain_dbi", p.antenna_gain_dbi);
    r.read("min_snr_db", p.min_snr_db);
    r.read("se_cap", p.se_cap);
    r.read("power_levels_dbm", p.power_levels_dbm);
    r.read("shadowing_sigma_db", p.shadowing_sigma_db);
    r.finish();
}

/// Node-level equipment blocks, applied on top of whatever `node` already holds.
void read_equipment(ObjectReader& r, const std::string& path, NodeSpec& node) {
    if (const json* j = r.child("airframe")) read_airframe(*j, path + ".airframe", node.airframe);
    if (const json* j = r.child("mimo")) read_mimo(*j, path + ".mimo", node.mimo);
    if (const json* j = r.child("ris")) read_ris(*j, path + ".ris", node.ris);
    if (const json* j = r.child("pv")) read_pv(*j, path + ".pv", node.pv);
    if (const json* j = r.child("battery")) read_battery(*j, path + ".battery", node.battery);
}

json airframe_json(const UavAirframe& a) {
    return {{"total_mass_kg", a.total_mass_kg},   {"rotor_count", a.rotor_count},
            {"rotor_radius_m", a.rotor_radius_m}, {"air_density", a.air_density},
            {"drive_efficiency", a.drive_efficiency}, {"tether_efficiency", a.tether_efficiency}};
}

json mimo_json(const MimoSpec& m) {
    return {{"antenna_count", m.antenna_count},
            {"carrier_freq_mhz", m.carrier_freq_mhz},
            {"fixed_power_w", m.fixed_power_w},
            {"per_antenna_circuit_power_w", m.per_antenna_circuit_power_w},
            {"per_user_processing_power_w", m.per_user_processing_power_w},
            {"pa_efficiency", m.pa_efficiency},
            {"max_tx_power_dbm", m.max_tx_power_dbm},
            {"sleep_power_w", m.sleep_power_w}};
}

json ris_json(const RisSpec& s) {
    json table = json::object();
    for (const auto& [bits, p] : s.per_element_power_w) table[std::to_string(bits)] = p;
    return {{"element_count", s.element_count}, {"phase_bits", s.phase_bits}, {"per_element_power_w", table}};
}

json pv_json(const PvSpec& p) {
    return {{"rated_power_w", p.rated_power_w}, {"derating_factor", p.derating_factor},
            {"temp_coeff_per_c", p.temp_coeff_per_c}, {"noct_c", p.noct_c},
            {"stc_irradiance_wm2", p.stc_irradiance_wm2}, {"stc_cell_temp_c", p.stc_cell_temp_c}};
}

json battery_json(const BatterySpec& b) {
    return {{"capacity_wh", b.capacity_wh}, {"charge_efficiency", b.charge_efficiency},
            {"flight_reserve", b.flight_reserve}};
}

} // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
        if (ec != std::errc{} || ptr != text.data() + pos + len) return std::nullopt;
        return v;
    };
    const auto y = field(0, 4);
    const auto m = field(5, 2);
    const auto d = field(8, 2);
    if (!y || !m || !d) return std::nullopt;
    const Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                    std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& date) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                       static_cast<unsigned>(date.day()));
}

int day_of_year(const Date& date) {
    using namespace std::chrono;
    const sys_days jan1{date.year() / January / 1};
    return static_cast<int>((sys_days{date} - jan1).count()) + 1;
}

std::vector<SeasonDay> default_seasons() {
    using namespace std::chrono;
    return {
        {"spring", 2022y / March / 20, 1.0, 10.0},
        {"summer", 2022y / June / 21, 14.0, 26.0},
        {"autumn", 2022y / September / 23, 9.0, 19.0},
        {"winter", 2022y / December / 21, -3.0, 2.0},
    };
}

std::vector<NodeSpec> default_node_layout(const Area& area, double altitude_m) {
    std::vector<NodeSpec> nodes;
    const double dx = (area.x_max - area.x_min) / 3.0;
    const double dy = (area.y_max - area.y_min) / 3.0;
    int id = 0;
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
            NodeSpec n;
            n.id = id++;
            n.position = {area.x_min + (col + 0.5) * dx, area.y_min + (row + 0.5) * dy, altitude_m};
            nodes.push_back(n);
        }
    }
    return nodes;
}

Scenario default_scenario() {
    Scenario s;
    s.nodes = default_node_layout(s.area, s.node_altitude_m);
    s.seasons = default_seasons();
    return s;
}

void validate(const Scenario& s) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(s.area.x_max > s.area.x_min) || !(s.area.y_max > s.area.y_min)) {
        fail("area: x_max/y_max must exceed x_min/y_min");
    }
    if (!(s.node_altitude_m >= 0.0)) fail("node_altitude_m: must be >= 0");
    if (s.user_count < 0) fail("user_count: must be >= 0");
    if (!(s.user_height_m >= 0.0)) fail("user_height_m: must be >= 0");
    if (!(s.demand.dl_mbps >= 0.0)) fail("dl_demand_mbps: must be >= 0");
    if (!(s.demand.ul_mbps >= 0.0)) fail("ul_demand_mbps: must be >= 0");
    if (s.run_count < 1) fail("run_count: must be >= 1");
    if (!(s.latitude_deg >= -90.0 && s.latitude_deg <= 90.0)) fail("latitude_deg: must be in [-90, 90]");
    if (!(s.cloud_factor >= 0.0 && s.cloud_factor <= 1.0)) fail("cloud_factor: must be in [0, 1]");
    if (!(s.cloud_variability >= 0.0 && s.cloud_variability <= 1.0)) fail("cloud_variability: must be in [0, 1]");

    if (s.seasons.size() != kSeasonCount) fail("seasons: exactly 4 dates are required");
    for (std::size_t i = 0; i < s.seasons.size(); ++i) {
        if (!s.seasons[i].date.ok()) fail(fmt::format("seasons[{}].date: invalid date", i));
        if (s.seasons[i].temp_max_c < s.seasons[i].temp_min_c) {
            fail(fmt::format("seasons[{}]: temp_max_c must be >= temp_min_c", i));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (s.seasons[j].date == s.seasons[i].date) fail(fmt::format("seasons[{}].date: dates must be distinct", i));
        }
    }

    if (s.nodes.empty()) fail("nodes: at least one node is required");
    std::set<int> ids;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        const auto where = fmt::format("nodes[{}]", i);
        if (!ids.insert(n.id).second) fail(fmt::format("{}.id: duplicate id {}", where, n.id));
        if (!(n.position.x >= s.area.x_min && n.position.x <= s.area.x_max && n.position.y >= s.area.y_min &&
              n.position.y <= s.area.y_max)) {
            fail(fmt::format("{}: position ({}, {}) lies outside the area", where, n.position.x, n.position.y));
        }
        if (n.position.z != s.node_altitude_m) fail(fmt::format("{}: altitude must equal node_altitude_m", where));
        try {
            validate(n.airframe);
            validate(n.mimo);
            validate(n.ris);
            validate(n.pv);
            validate(n.battery);
            validate(s.radio, n.mimo.max_tx_power_dbm);
        } catch (const ParameterError& e) {
            fail(fmt::format("{}: {}", where, e.what()));
        }
    }
}

Scenario scenario_from_json(const json& doc) {
    Scenario s;
    s.seasons = default_seasons();
    ObjectReader r(doc, "");

    if (const json* area = r.child("area")) {
        ObjectReader ar(*area, "area");
        ar.read("x_min", s.area.x_min);
        ar.read("y_min", s.area.y_min);
        ar.read("x_max", s.area.x_max);
        ar.read("y_max", s.area.y_max);
        ar.finish();
    }
    r.read("node_altitude_m", s.node_altitude_m);
    r.read("user_count", s.user_count);
    r.read("user_height_m", s.user_height_m);
    r.read("dl_demand_mbps", s.demand.dl_mbps);
    r.read("ul_demand_mbps", s.demand.ul_mbps);
    r.read("run_count", s.run_count);
    r.read("latitude_deg", s.latitude_deg);
    r.read("cloud_factor", s.cloud_factor);
    r.read("cloud_variability", s.cloud_variability);
    if (const json* radio = r.child("radio")) read_radio(*radio, s.radio);

    NodeSpec defaults;
    if (const json* d = r.child("node_defaults")) {
        ObjectReader dr(*d, "node_defaults");
        read_equipment(dr, "node_defaults", defaults);
        dr.finish();
    }

    if (const json* nodes = r.child("nodes")) {
        if (!nodes->is_array()) throw ConfigError("nodes: must be an array");
        for (std::size_t i = 0; i < nodes->size(); ++i) {
            const auto path = fmt::format("nodes[{}]", i);
            NodeSpec n = defaults;
            n.id = static_cast<int>(i);
            ObjectReader nr((*nodes)[i], path);
            nr.read("id", n.id);
            if (!(*nodes)[i].contains("x") || !(*nodes)[i].contains("y")) {
                throw ConfigError(path + ": x and y are required");
            }
            nr.read("x", n.position.x);
            nr.read("y", n.position.y);
            n.position.z = s.node_altitude_m;
            read_equipment(nr, path, n);
            nr.finish();
            s.nodes.push_back(std::move(n));
        }
    } else {
        s.nodes = default_node_layout(s.area, s.node_altitude_m);
        for (auto& n : s.nodes) {
            const int id = n.id;
            const Position pos = n.position;
            n = defaults;
            n.id = id;
            n.position = pos;
        }
    }

    if (const json* seasons = r.child("seasons")) {
        if (!seasons->is_array() || seasons->size() != kSeasonCount) {
            throw ConfigError("seasons: must be an array of exactly 4 entries");
        }
        for (std::size_t i = 0; i < kSeasonCount; ++i) {
            const auto path = fmt::format("seasons[{}]", i);
            ObjectReader sr((*seasons)[i], path);
            std::string date_text;
            sr.read("date", date_text);
            if (!date_text.empty()) {
                const auto date = parse_date(date_text);
                if (!date) throw ConfigError(fmt::format("{}.date: '{}' is not a YYYY-MM-DD date", path, date_text));
                s.seasons[i].date = *date;
            }
            sr.read("temp_min_c", s.seasons[i].temp_min_c);
            sr.read("temp_max_c", s.seasons[i].temp_max_c);
            sr.finish();
        }
    }
    r.finish();
    validate(s);
    return s;
}

Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
    return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& s) {
    json nodes = json::array();
    for (const auto& n : s.nodes) {
        nodes.push_back({{"id", n.id},
                         {"x", n.position.x},
                         {"y", n.position.y},
                         {"airframe", airframe_json(n.airframe)},
                         {"mimo", mimo_json(n.mimo)},
                         {"ris", ris_json(n.ris)},
                         {"pv", pv_json(n.pv)},
                         {"battery", battery_json(n.battery)}});
    }
    json seasons = json::array();
    for (const auto& d : s.seasons) {
        seasons.push_back({{"date", format_date(d.date)}, {"temp_min_c", d.temp_min_c}, {"temp_max_c", d.temp_max_c}});
    }
    const auto& r = s.radio;
    return {{"area", {{"x_min", s.area.x_min}, {"y_min", s.area.y_min}, {"x_max", s.area.x_max}, {"y_max", s.area.y_max}}},
            {"node_altitude_m", s.node_altitude_m},
            {"nodes", nodes},
            {"user_count", s.user_count},
            {"user_height_m", s.user_height_m},
            {"dl_demand_mbps", s.demand.dl_mbps},
            {"ul_demand_mbps", s.demand.ul_mbps},
            {"radio",
             {{"pathloss_exponent", r.pathloss_exponent},
              {"reference_loss_at_1m_db", r.reference_loss_at_1m_db},
              {"bandwidth_mhz", r.bandwidth_mhz},
              {"prb_bandwidth_khz", r.prb_bandwidth_khz},
              {"total_prbs", r.total_prbs},
              {"noise_figure_db", r.noise_figure_db},
              {"antenna_gain_dbi", r.antenna_gain_dbi},
              {"min_snr_db", r.min_snr_db},
              {"se_cap", r.se_cap},
              {"power_levels_dbm", r.power_levels_dbm},
              {"shadowing_sigma_db", r.shadowing_sigma_db}}},
            {"run_count", s.run_count},
            {"seasons", seasons},
            {"latitude_deg", s.latitude_deg},
            {"cloud_factor", s.cloud_factor},
            {"cloud_variability", s.cloud_variability}};
}

DesignInput instance_from_json(const json& doc) {
    DesignInput input;
    ObjectReader r(doc, "");
    double node_altitude = 50.0;
    double user_height = 1.5;
    r.read("node_altitude_m", node_altitude);
    r.read("user_height_m", user_height);
    r.read("dl_demand_mbps", input.demand.dl_mbps);
    r.read("ul_demand_mbps", input.demand.ul_mbps);
    if (const json* radio = r.child("radio")) read_radio(*radio, input.radio);
    MimoSpec mimo;
    if (const json* m = r.child("mimo")) read_mimo(*m, "mimo", mimo);

    auto read_points = [&](const char* key, double default_z, auto&& emit) {
        const json* arr = r.child(key);
        if (arr == nullptr) return;
        if (!arr->is_array()) throw ConfigError(fmt::format("{}: must be an array", key));
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const auto path = fmt::format("{}[{}]", key, i);
            if (!(*arr)[i].contains("x") || !(*arr)[i].contains("y")) {
                throw ConfigError(path + ": x and y are required");
            }
            ObjectReader pr((*arr)[i], path);
            int id = static_cast<int>(i);
            Position pos{0.0, 0.0, default_z};
            pr.read("id", id);
            pr.read("x", pos.x);
            pr.read("y", pos.y);
            pr.read("z", pos.z);
            pr.finish();
            emit(id, pos);
        }
    };
    read_points("nodes", node_altitude, [&](int id, Position p) { input.nodes.push_back({id, p, mimo}); });
    read_points("users", user_height, [&](int id, Position p) { input.users.push_back({id, p}); });
    r.finish();

    try {
        validate(mimo);
        validate(input.radio, mimo.max_tx_power_dbm);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (!(input.demand.dl_mbps >= 0.0) || !(input.demand.ul_mbps >= 0.0)) {
        throw ConfigError("dl_demand_mbps/ul_demand_mbps: must be >= 0");
    }
    return input;
}

DesignInput load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open instance '{}'", path.string()));
    try {
        return instance_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("instance '{}' is not valid JSON: {}", path.string(), e.what()));
    }
}

double SeededRng::normal() {
    const double u1 = 1.0 - uniform(); // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<User> place_users(const Scenario& scenario, std::uint64_t seed) {
    SeededRng rng(seed);
    const auto& a = scenario.area;
    std::vector<User> users;
    users.reserve(static_cast<std::size_t>(std::max(0, scenario.user_count)));
    for (int i = 0; i < scenario.user_count; ++i) {
        const double x = a.x_min + rng.uniform() * (a.x_max - a.x_min);
        const double y = a.y_min + rng.uniform() * (a.y_max - a.y_min);
        users.push_back({i, {x, y, scenario.user_height_m}});
    }
    return users;
}

} // namespace uavran
