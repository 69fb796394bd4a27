#include "uavran/sim_engine.hpp"

#include "uavran/errors.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace uavran {

namespace {

constexpr std::uint64_t kShadowingStream = 0x9e3779b97f4a7c15ULL;

double ratio_percent(double part, double whole) { return whole > 0.0 ? 100.0 * part / whole : 0.0; }

} // namespace

std::pair<NodeState, StepLedgerEntry> step(const NodeState& state, const NodeLoad& load, const WeatherSample& weather,
                                           bool with_res, double step_minutes) {
    const double hours = step_minutes / 60.0;
    StepLedgerEntry e;
    e.node_id = load.node_id;
    e.t = weather.minute_index;
    e.ghi_wm2 = weather.ghi_wm2;
    e.ambient_c = weather.ambient_c;
    e.hover_wh = load.hover_w * hours;
    e.mimo_wh = load.mimo_w * hours;
    e.ris_wh = load.ris_w * hours;
    e.consumed_wh = e.hover_wh + e.mimo_wh + e.ris_wh;
    if (with_res) {
        e.pv_power_w = pv_power(load.pv, weather.ghi_wm2, weather.ambient_c);
        e.harvested_wh = e.pv_power_w * hours;
    }

    const auto [battery, flows] = battery_step(state.battery, load.battery, e.consumed_wh, e.harvested_wh);
    e.pv_used_wh = flows.pv_used_wh;
    e.pv_wasted_wh = flows.pv_wasted_wh;
    e.drawn_from_battery_wh = flows.drawn_from_battery_wh;
    e.soc_after_wh = battery.soc_wh;
    e.swaps_so_far = battery.swap_count;
    return {NodeState{battery}, e};
}

std::vector<NodeLoad> node_loads(const Scenario& scenario, const NetworkConfig& config) {
    std::vector<NodeLoad> loads;
    loads.reserve(scenario.nodes.size());
    for (const auto& n : scenario.nodes) {
        const auto& cell = config.cell(n.id);
        NodeLoad l;
        l.node_id = n.id;
        l.hover_w = uav_hover_power(n.airframe);
        l.mimo_w = mimo_power(n.mimo, cell.active, config.served_users(n.id), cell.tx_power_dbm);
        l.ris_w = ris_power(n.ris);
        l.pv = n.pv;
        l.battery = n.battery;
        loads.push_back(l);
    }
    return loads;
}

std::uint64_t weather_digest(const WeatherSeries& series) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& d : series.days) {
        const int serial = static_cast<int>(std::chrono::sys_days{d}.time_since_epoch().count());
        mix(&serial, sizeof serial);
    }
    for (const auto& s : series.samples) {
        mix(&s.minute_index, sizeof s.minute_index);
        mix(&s.ghi_wm2, sizeof s.ghi_wm2);
        mix(&s.ambient_c, sizeof s.ambient_c);
    }
    return h;
}

DesignInput design_input(const Scenario& scenario, std::uint64_t seed) {
    DesignInput input;
    for (const auto& n : scenario.nodes) input.nodes.push_back({n.id, n.position, n.mimo});
    input.users = place_users(scenario, seed);
    input.radio = scenario.radio;
    input.demand = scenario.demand;
    if (scenario.radio.shadowing_sigma_db > 0.0) {
        SeededRng rng(seed ^ kShadowingStream);
        input.shadowing_db.assign(input.nodes.size(), std::vector<double>(input.users.size(), 0.0));
        for (auto& row : input.shadowing_db) {
            for (auto& v : row) v = scenario.radio.shadowing_sigma_db * rng.normal();
        }
    }
    return input;
}

RunResult run_simulation(const Scenario& scenario, const WeatherSeries& weather, bool with_res, std::uint64_t seed,
                         const RunOptions& options) {
    std::vector<Date> dates;
    for (const auto& s : scenario.seasons) dates.push_back(s.date);
    check_weather_coverage(weather, dates);

    RunResult result;
    result.seed = seed;
    result.with_res = with_res;
    result.weather_digest = weather_digest(weather);

    const auto input = design_input(scenario, seed);
    result.config = greedy_design(input);
    result.users = input.users;
    const auto loads = node_loads(scenario, result.config);
    const std::size_t n_nodes = loads.size();
    for (const auto& l : loads) result.node_ids.push_back(l.node_id);

    result.day_totals.assign(dates.size(), std::vector<NodeDayTotals>(n_nodes));
    result.mean_soc_wh.assign(weather.samples.size(), 0.0);
    result.mean_pv_w.assign(weather.samples.size(), 0.0);
    result.ghi_wm2.reserve(weather.samples.size());
    if (options.keep_ledger) result.ledger.reserve(weather.samples.size() * n_nodes);

    std::vector<NodeState> states(n_nodes);
    for (std::size_t t = 0; t < weather.samples.size(); ++t) {
        const auto& sample = weather.samples[t];
        const auto day = t / kMinutesPerDay;
        if (t % kMinutesPerDay == 0) {
            for (std::size_t i = 0; i < n_nodes; ++i) {
                states[i].battery.soc_wh = fresh_battery(loads[i].battery).soc_wh;
            }
        }
        result.ghi_wm2.push_back(sample.ghi_wm2);
        double soc_sum = 0.0;
        double pv_sum = 0.0;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const long swaps_before = states[i].battery.swap_count;
            StepLedgerEntry entry;
            try {
                std::tie(states[i], entry) = step(states[i], loads[i], sample, with_res);
            } catch (const std::exception& e) {
                throw std::runtime_error(
                    fmt::format("simulation aborted at t={} node_id={}: {}", sample.minute_index, loads[i].node_id,
                                e.what()));
            }
            auto& tot = result.day_totals[day][i];
            tot.consumed_wh += entry.consumed_wh;
            tot.harvested_wh += entry.harvested_wh;
            tot.pv_used_wh += entry.pv_used_wh;
            tot.pv_wasted_wh += entry.pv_wasted_wh;
            tot.drawn_wh += entry.drawn_from_battery_wh;
            tot.peak_pv_w = std::max(tot.peak_pv_w, entry.pv_power_w);
            tot.swaps += states[i].battery.swap_count - swaps_before;
            soc_sum += entry.soc_after_wh;
            pv_sum += entry.pv_power_w;
            if (options.keep_ledger) result.ledger.push_back(entry);
        }
        if (n_nodes > 0) {
            result.mean_soc_wh[t] = soc_sum / static_cast<double>(n_nodes);
            result.mean_pv_w[t] = pv_sum / static_cast<double>(n_nodes);
        }
    }
    return result;
}

long constant_load_day_swaps(double daily_wh, double usable_wh) {
    BatterySpec spec;
    spec.capacity_wh = usable_wh;
    spec.flight_reserve = 0.0;
    auto state = fresh_battery(spec);
    const double per_step = daily_wh / kMinutesPerDay;
    for (int m = 0; m < kMinutesPerDay; ++m) state = battery_step(state, spec, per_step, 0.0).first;
    return state.swap_count;
}

StudyMetrics compute_metrics(const Scenario& scenario, const std::vector<RunPair>& pairs) {
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto& a = pairs[r].without_res;
        const auto& b = pairs[r].with_res;
        if (a.with_res || !b.with_res) throw ConfigError(fmt::format("pair {}: expected one run without and one with RES", r));
        if (a.seed != b.seed || a.weather_digest != b.weather_digest || a.node_ids != b.node_ids ||
            to_canonical_string(a.config) != to_canonical_string(b.config)) {
            throw ConfigError(fmt::format("pair {}: runs differ in seed, weather or network design", r));
        }
        if (a.day_totals.size() != kSeasonCount || b.day_totals.size() != kSeasonCount) {
            throw ConfigError(fmt::format("pair {}: expected {} simulated days", r, kSeasonCount));
        }
    }

    StudyMetrics m;
    for (std::size_t d = 0; d < kSeasonCount; ++d) {
        auto& s = m.seasons[d];
        s.season = scenario.seasons.at(d).name;
        s.date = format_date(scenario.seasons.at(d).date);
        double harvest = 0.0, peak = 0.0, used = 0.0, consumed = 0.0, swaps_no = 0.0, swaps_pv = 0.0;
        std::size_t samples = 0;
        for (const auto& p : pairs) {
            for (std::size_t i = 0; i < p.with_res.node_ids.size(); ++i) {
                const auto& pv = p.with_res.day_totals[d][i];
                const auto& base = p.without_res.day_totals[d][i];
                harvest += pv.harvested_wh;
                peak += pv.peak_pv_w;
                used += pv.pv_used_wh;
                consumed += pv.consumed_wh;
                swaps_pv += static_cast<double>(pv.swaps);
                swaps_no += static_cast<double>(base.swaps);
                ++samples;
            }
        }
        if (samples > 0) {
            const double n = static_cast<double>(samples);
            s.total_harvest_wh = harvest / n;
            s.peak_harvest_w = peak / n;
            s.anuc_no_res = swaps_no / n;
            s.anuc_with_res = swaps_pv / n;
        }
        s.arec_percent = ratio_percent(used, consumed);
    }

    m.mean.season = "mean";
    for (const auto& s : m.seasons) {
        m.mean.total_harvest_wh += s.total_harvest_wh / kSeasonCount;
        m.mean.peak_harvest_w += s.peak_harvest_w / kSeasonCount;
        m.mean.arec_percent += s.arec_percent / kSeasonCount;
        m.mean.anuc_no_res += s.anuc_no_res / kSeasonCount;
        m.mean.anuc_with_res += s.anuc_with_res / kSeasonCount;
    }

    for (const auto& p : pairs) {
        RunMetrics rm;
        rm.seed = p.with_res.seed;
        double used = 0.0, consumed = 0.0;
        const double nodes = static_cast<double>(std::max<std::size_t>(1, p.with_res.node_ids.size()));
        for (std::size_t d = 0; d < kSeasonCount; ++d) {
            double day_used = 0.0, day_consumed = 0.0, no = 0.0, pv = 0.0;
            for (std::size_t i = 0; i < p.with_res.node_ids.size(); ++i) {
                day_used += p.with_res.day_totals[d][i].pv_used_wh;
                day_consumed += p.with_res.day_totals[d][i].consumed_wh;
                pv += static_cast<double>(p.with_res.day_totals[d][i].swaps);
                no += static_cast<double>(p.without_res.day_totals[d][i].swaps);
            }
            used += day_used;
            consumed += day_consumed;
            rm.season_arec_percent[d] = ratio_percent(day_used, day_consumed);
            rm.anuc_no_res[d] = no / nodes;
            rm.anuc_with_res[d] = pv / nodes;
        }
        rm.arec_percent = ratio_percent(used, consumed);
        m.runs.push_back(rm);
    }
    return m;
}

} // namespace uavran
