#include "uavran/report.hpp"

#include "uavran/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace uavran {

using nlohmann::json;

namespace {

std::string fixed2(double v) { return fmt::format("{:.2f}", v); }

/// Hundredths encoded by a "[-]d+.dd" string.
long long hundredths(const std::string& text) {
    const bool negative = !text.empty() && text.front() == '-';
    std::string digits;
    for (char c : text) {
        if (c >= '0' && c <= '9') digits.push_back(c);
    }
    const long long v = std::stoll(digits);
    return negative ? -v : v;
}

/// Exact decimal form of sum_hundredths / count for count = 4 (at most 4 decimals, at least 2).
std::string exact_mean(long long sum_hundredths) {
    const long long ten_thousandths = sum_hundredths * 25;
    const bool negative = ten_thousandths < 0;
    const long long a = std::llabs(ten_thousandths);
    std::string frac = fmt::format("{:04d}", a % 10000);
    while (frac.size() > 2 && frac.back() == '0') frac.pop_back();
    return fmt::format("{}{}.{}", negative ? "-" : "", a / 10000, frac);
}

class OutputGuard {
public:
    explicit OutputGuard(std::filesystem::path dir) : dir_(std::move(dir)) {
        if (!std::filesystem::exists(dir_)) {
            std::filesystem::create_directories(dir_);
            created_dir_ = true;
        }
    }
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;
    ~OutputGuard() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : files_) std::filesystem::remove(p, ec);
        if (created_dir_ && std::filesystem::is_empty(dir_, ec)) std::filesystem::remove(dir_, ec);
    }

    std::ofstream open(const std::string& name) {
        const auto path = dir_ / name;
        files_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        return out;
    }
    void commit() { committed_ = true; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
    bool created_dir_ = false;
    bool committed_ = false;
};

json season_json(const SeasonMetrics& s) {
    return {{"season", s.season},
            {"date", s.date},
            {"harvest_total_wh", s.total_harvest_wh},
            {"harvest_peak_w", s.peak_harvest_w},
            {"arec_percent", s.arec_percent},
            {"anuc_no_res", s.anuc_no_res},
            {"anuc_with_res", s.anuc_with_res}};
}

json design_json(const NetworkConfig& c) {
    json cells = json::array();
    for (const auto& cell : c.cells) {
        cells.push_back({{"node_id", cell.node_id},
                         {"active", cell.active},
                         {"tx_power_dbm", cell.active ? json(cell.tx_power_dbm) : json(nullptr)},
                         {"served_users", c.served_users(cell.node_id)}});
    }
    return {{"cells", cells}, {"covered_users", c.covered_count}, {"transceiver_power_w", c.total_power_w}};
}

} // namespace

StudyOutput run_study(const Scenario& scenario, const StudyOptions& options) {
    if (options.runs < 1) throw ConfigError("runs must be >= 1");
    std::optional<WeatherSeries> csv_weather;
    if (!options.weather_csv.empty()) csv_weather = load_weather_csv(options.weather_csv);

    StudyOutput out;
    const auto n = static_cast<std::size_t>(options.runs);
    out.pairs.resize(n);
    for (std::size_t r = 0; r < n; ++r) out.seeds.push_back(options.seed + r);

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < n; r = next++) {
            try {
                const auto seed = out.seeds[r];
                const WeatherSeries weather = csv_weather ? *csv_weather : synth_study_weather(scenario, seed);
                RunOptions ro{options.keep_ledgers};
                out.pairs[r].without_res = run_simulation(scenario, weather, false, seed, ro);
                out.pairs[r].with_res = run_simulation(scenario, weather, true, seed, ro);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::clamp<unsigned>(options.jobs, 1, static_cast<unsigned>(n));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    out.metrics = compute_metrics(scenario, out.pairs);
    return out;
}

std::string summary_csv(const StudyMetrics& metrics) {
    std::ostringstream os;
    os << "season,date,harvest_no_res_wh,harvest_pv_wh,peak_no_res_w,peak_pv_w,"
          "arec_no_res_percent,arec_pv_percent,anuc_no_res,anuc_pv\n";
    // Without PV nothing is harvested, so those columns are identically zero.
    std::array<long long, 8> sums{};
    for (const auto& s : metrics.seasons) {
        const std::array<std::string, 8> cells{fixed2(0.0),          fixed2(s.total_harvest_wh), fixed2(0.0),
                                               fixed2(s.peak_harvest_w), fixed2(0.0),          fixed2(s.arec_percent),
                                               fixed2(s.anuc_no_res),   fixed2(s.anuc_with_res)};
        os << s.season << ',' << s.date;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << ',' << cells[i];
            sums[i] += hundredths(cells[i]);
        }
        os << '\n';
    }
    os << "mean,";
    for (auto sum : sums) os << ',' << exact_mean(sum);
    os << '\n';
    return os.str();
}

json metrics_json(const Scenario& scenario, const StudyOutput& study, const StudyOptions& options,
                  const std::vector<std::string>& ledger_files) {
    json seasons = json::array();
    for (const auto& s : study.metrics.seasons) seasons.push_back(season_json(s));
    json runs = json::array();
    for (std::size_t r = 0; r < study.metrics.runs.size(); ++r) {
        const auto& rm = study.metrics.runs[r];
        runs.push_back({{"run", r},
                        {"seed", rm.seed},
                        {"arec_percent", rm.arec_percent},
                        {"season_arec_percent", rm.season_arec_percent},
                        {"anuc_no_res", rm.anuc_no_res},
                        {"anuc_with_res", rm.anuc_with_res},
                        {"design", design_json(study.pairs[r].with_res.config)}});
    }
    return {{"seasons", seasons},
            {"mean", season_json(study.metrics.mean)},
            {"runs", runs},
            {"seeds", study.seeds},
            {"weather", options.weather_csv.empty() ? std::string("synth") : options.weather_csv.string()},
            {"anuc_averaging", "completed battery swaps per station per day, averaged over stations and runs"},
            {"arec_definition", "100 * sum(pv_used_wh) / sum(consumed_wh) over the with-PV runs"},
            {"ledger_files", ledger_files},
            {"config", scenario_to_json(scenario)}};
}

void write_ledger_csv(const RunResult& run, std::ostream& out) {
    out << "t,day,minute,node_id,ghi_wm2,ambient_c,hover_wh,mimo_wh,ris_wh,consumed_wh,pv_power_w,harvested_wh,"
           "pv_used_wh,pv_wasted_wh,drawn_from_battery_wh,soc_after_wh,swaps_so_far\n";
    for (const auto& e : run.ledger) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", e.t, e.t / kMinutesPerDay,
                           e.t % kMinutesPerDay, e.node_id, e.ghi_wm2, e.ambient_c, e.hover_wh, e.mimo_wh, e.ris_wh,
                           e.consumed_wh, e.pv_power_w, e.harvested_wh, e.pv_used_wh, e.pv_wasted_wh,
                           e.drawn_from_battery_wh, e.soc_after_wh, e.swaps_so_far);
    }
}

std::string timeseries_csv(const StudyOutput& study, std::size_t season_index) {
    std::ostringstream os;
    os << "minute,mean_ghi_wm2,mean_soc_wh,mean_pv_w,mean_soc_no_res_wh\n";
    const double runs = static_cast<double>(std::max<std::size_t>(1, study.pairs.size()));
    for (int m = 0; m < kMinutesPerDay; ++m) {
        const auto t = season_index * kMinutesPerDay + static_cast<std::size_t>(m);
        double ghi = 0.0, soc = 0.0, pv = 0.0, soc_base = 0.0;
        for (const auto& p : study.pairs) {
            ghi += p.with_res.ghi_wm2.at(t);
            soc += p.with_res.mean_soc_wh.at(t);
            pv += p.with_res.mean_pv_w.at(t);
            soc_base += p.without_res.mean_soc_wh.at(t);
        }
        os << fmt::format("{},{:.4f},{:.4f},{:.4f},{:.4f}\n", m, ghi / runs, soc / runs, pv / runs, soc_base / runs);
    }
    return os.str();
}

int cmd_simulate(const SimulateArgs& args, std::ostream& log) {
    Scenario scenario;
    StudyOptions options;
    try {
        if (args.config.empty()) throw ConfigError("--config is required");
        scenario = load_config(args.config);
        options.runs = args.runs.value_or(scenario.run_count);
        if (options.runs < 1) throw ConfigError("--runs must be >= 1");
        options.seed = args.seed;
        if (args.weather != "synth") options.weather_csv = args.weather;
        options.keep_ledgers = args.write_ledgers;
        options.jobs = args.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : args.jobs;
        if (!options.weather_csv.empty()) {
            std::vector<Date> dates;
            for (const auto& s : scenario.seasons) dates.push_back(s.date);
            check_weather_coverage(load_weather_csv(options.weather_csv), dates);
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        OutputGuard guard(args.out);
        const auto study = run_study(scenario, options);

        std::vector<std::string> ledger_files;
        if (options.keep_ledgers) {
            for (std::size_t r = 0; r < study.pairs.size(); ++r) {
                for (const RunResult* run : {&study.pairs[r].without_res, &study.pairs[r].with_res}) {
                    const auto name = fmt::format("ledger_{}_{}.csv", r, run->with_res ? "pv" : "nores");
                    auto out = guard.open(name);
                    write_ledger_csv(*run, out);
                    ledger_files.push_back(name);
                }
            }
        }
        for (std::size_t d = 0; d < kSeasonCount; ++d) {
            guard.open(fmt::format("timeseries_{}.csv", scenario.seasons[d].name)) << timeseries_csv(study, d);
        }
        const auto summary = summary_csv(study.metrics);
        guard.open("summary.csv") << summary;
        guard.open("metrics.json") << metrics_json(scenario, study, options, ledger_files).dump(2) << '\n';
        guard.commit();
        log << summary;
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_weather_synth(const WeatherSynthArgs& args, std::ostream& log) {
    const auto date = parse_date(args.date);
    if (!date) {
        log << "error: --date must be a valid YYYY-MM-DD date\n";
        return kExitUsage;
    }
    if (!(args.cloud_factor >= 0.0 && args.cloud_factor <= 1.0) ||
        !(args.latitude_deg >= -90.0 && args.latitude_deg <= 90.0) || args.temp_max_c < args.temp_min_c) {
        log << "error: --cloud must be in [0,1], --lat in [-90,90], and --tmax >= --tmin\n";
        return kExitUsage;
    }
    if (args.out.empty()) {
        log << "error: --out is required\n";
        return kExitUsage;
    }
    ClearSkyDay day;
    day.date = *date;
    day.latitude_deg = args.latitude_deg;
    day.cloud_factor = args.cloud_factor;
    day.temp_min_c = args.temp_min_c;
    day.temp_max_c = args.temp_max_c;
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
        log << "error: cannot write " << args.out.string() << '\n';
        return kExitFailure;
    }
    write_weather_csv(synth_day(day, args.seed), out);
    return kExitOk;
}

int cmd_oracle(const OracleArgs& args, std::ostream& log) {
    if (args.instance.empty() && !args.daily_wh) {
        log << "error: give --instance and/or --daily-wh with --usable-wh\n";
        return kExitUsage;
    }
    bool pass = true;

    if (args.daily_wh || args.usable_wh) {
        if (!args.daily_wh || !args.usable_wh || !(*args.usable_wh > 0.0) || !(*args.daily_wh >= 0.0) ||
            *args.daily_wh / kMinutesPerDay > *args.usable_wh) {
            log << "error: --daily-wh >= 0 and --usable-wh > 0 are both required, with one step's load within capacity\n";
            return kExitUsage;
        }
        const long simulated = constant_load_day_swaps(*args.daily_wh, *args.usable_wh);
        const auto closed = static_cast<long>(std::floor(*args.daily_wh / *args.usable_wh));
        const bool ok = simulated == closed;
        pass = pass && ok;
        log << fmt::format("constant load {} Wh/day, usable {} Wh: simulated swaps {}, floor(E/U) {} -> {}\n",
                           *args.daily_wh, *args.usable_wh, simulated, closed, ok ? "PASS" : "FAIL");
    }

    if (!args.instance.empty()) {
        DesignInput input;
        NetworkConfig oracle;
        try {
            input = load_instance(args.instance);
            oracle = brute_force_design(input);
        } catch (const ConfigError& e) {
            log << "error: " << e.what() << '\n';
            return kExitUsage;
        } catch (const SizeError& e) {
            log << "error: " << e.what() << '\n';
            return kExitUsage;
        }
        const auto greedy = greedy_design(input);
        const auto feasible = check_feasibility(input, greedy);
        const auto minimal = check_local_minimality(input, greedy);
        const bool equal_cov = greedy.covered_count == oracle.covered_count;
        const bool power_ok = greedy.total_power_w >= oracle.total_power_w - 1e-9;
        const bool ok = !feasible && !minimal && equal_cov && power_ok;
        pass = pass && ok;
        log << fmt::format("greedy: covered {} power {:.4f} W\n", greedy.covered_count, greedy.total_power_w);
        log << fmt::format("oracle: covered {} power {:.4f} W\n", oracle.covered_count, oracle.total_power_w);
        if (feasible) log << "greedy infeasible: " << *feasible << '\n';
        if (minimal) log << "greedy not locally minimal: " << *minimal << '\n';
        log << (ok ? "PASS" : "FAIL") << '\n';
    }
    return pass ? kExitOk : kExitFailure;
}

} // namespace uavran
