#pragma once

#include "uavran/scenario_io.hpp"
#include "uavran/sim_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace uavran {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct StudyOptions {
    int runs = 10;
    std::uint64_t seed = 42;
    /// Empty for synthetic clear-sky weather, otherwise a weather CSV covering the four days.
    std::filesystem::path weather_csv;
    bool keep_ledgers = false;
    unsigned jobs = 1;
};

struct StudyOutput {
    std::vector<RunPair> pairs;
    StudyMetrics metrics;
    std::vector<std::uint64_t> seeds;
};

/// Run r uses seed + r for both members of its pair.
StudyOutput run_study(const Scenario& scenario, const StudyOptions& options);

/// Summary table: one row per season plus a mean row; seasons at 2 decimals, the mean row exact.
std::string summary_csv(const StudyMetrics& metrics);
nlohmann::json metrics_json(const Scenario& scenario, const StudyOutput& study, const StudyOptions& options,
                            const std::vector<std::string>& ledger_files);
void write_ledger_csv(const RunResult& run, std::ostream& out);
/// minute, mean_ghi_wm2, mean_soc_wh, mean_pv_w, mean_soc_no_res_wh for one season day.
std::string timeseries_csv(const StudyOutput& study, std::size_t season_index);

struct SimulateArgs {
    std::filesystem::path config;
    std::optional<int> runs;
    std::uint64_t seed = 42;
    std::string weather = "synth";
    std::filesystem::path out = "out";
    bool write_ledgers = true;
    unsigned jobs = 0; // 0 = hardware concurrency
};

int cmd_simulate(const SimulateArgs& args, std::ostream& log);

struct WeatherSynthArgs {
    std::string date;
    double latitude_deg = 52.41;
    double cloud_factor = 0.7;
    double temp_min_c = 5.0;
    double temp_max_c = 15.0;
    std::uint64_t seed = 0;
    std::filesystem::path out;
};

int cmd_weather_synth(const WeatherSynthArgs& args, std::ostream& log);

struct OracleArgs {
    std::filesystem::path instance;
    std::optional<double> daily_wh;
    std::optional<double> usable_wh;
};

int cmd_oracle(const OracleArgs& args, std::ostream& log);

} // namespace uavran
