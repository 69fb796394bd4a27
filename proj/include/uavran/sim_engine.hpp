#pragma once

#include "uavran/energy_models.hpp"
#include "uavran/network_design.hpp"
#include "uavran/scenario_io.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace uavran {

inline constexpr int kStepsPerRun = kSeasonCount * kMinutesPerDay;

/// Constant electrical loads and storage of one station for a whole run.
struct NodeLoad {
    int node_id = 0;
    double hover_w = 0.0;
    double mimo_w = 0.0;
    double ris_w = 0.0;
    PvSpec pv;
    BatterySpec battery;

    [[nodiscard]] double total_w() const { return hover_w + mimo_w + ris_w; }
};

struct StepLedgerEntry {
    int node_id = 0;
    int t = 0; // minute index within the run
    double ghi_wm2 = 0.0;
    double ambient_c = 0.0;
    double hover_wh = 0.0;
    double mimo_wh = 0.0;
    double ris_wh = 0.0;
    double consumed_wh = 0.0;
    double pv_power_w = 0.0;
    double harvested_wh = 0.0;
    double pv_used_wh = 0.0;
    double pv_wasted_wh = 0.0;
    double drawn_from_battery_wh = 0.0;
    double soc_after_wh = 0.0;
    long swaps_so_far = 0;
};

/// Battery of one station plus the swaps it has needed so far in the run.
struct NodeState {
    BatteryState battery;
};

/// One step of `step_minutes` minutes for one station.
std::pair<NodeState, StepLedgerEntry> step(const NodeState& state, const NodeLoad& load, const WeatherSample& weather,
                                           bool with_res, double step_minutes = 1.0);

/// Per-station loads under a network design.
std::vector<NodeLoad> node_loads(const Scenario& scenario, const NetworkConfig& config);

struct NodeDayTotals {
    double consumed_wh = 0.0;
    double harvested_wh = 0.0;
    double pv_used_wh = 0.0;
    double pv_wasted_wh = 0.0;
    double drawn_wh = 0.0;
    double peak_pv_w = 0.0;
    long swaps = 0;
};

struct RunOptions {
    bool keep_ledger = false;
};

struct RunResult {
    std::uint64_t seed = 0;
    bool with_res = false;
    NetworkConfig config;
    std::vector<User> users;
    std::vector<int> node_ids;
    /// day_totals[day][node position in node_ids]
    std::vector<std::vector<NodeDayTotals>> day_totals;
    /// Mean state of charge and PV power over stations for every minute of the run.
    std::vector<double> mean_soc_wh;
    std::vector<double> mean_pv_w;
    std::vector<double> ghi_wm2;
    std::uint64_t weather_digest = 0;
    std::vector<StepLedgerEntry> ledger; // filled when RunOptions::keep_ledger
};

/// FNV-1a over the sample values; equal series give equal digests.
std::uint64_t weather_digest(const WeatherSeries& series);

/// Users and shadowing drawn from `seed`, one greedy design.
DesignInput design_input(const Scenario& scenario, std::uint64_t seed);

/**
 * Executes 4 x 1440 one-minute steps for every station. The battery is
 * fresh at the start of each day so the seasons are independent.
 */
RunResult run_simulation(const Scenario& scenario, const WeatherSeries& weather, bool with_res, std::uint64_t seed,
                         const RunOptions& options = {});

/// Swaps a fresh battery of `usable_wh` needs to carry a constant load of `daily_wh` over one day of minute steps.
long constant_load_day_swaps(double daily_wh, double usable_wh);

struct RunPair {
    RunResult without_res;
    RunResult with_res;
};

struct SeasonMetrics {
    std::string season;
    std::string date;
    double total_harvest_wh = 0.0;
    double peak_harvest_w = 0.0;
    double arec_percent = 0.0;
    double anuc_no_res = 0.0;
    double anuc_with_res = 0.0;
};

struct RunMetrics {
    std::uint64_t seed = 0;
    /// Over all stations and days of the run.
    double arec_percent = 0.0;
    std::array<double, kSeasonCount> season_arec_percent{};
    std::array<double, kSeasonCount> anuc_no_res{};
    std::array<double, kSeasonCount> anuc_with_res{};
};

struct StudyMetrics {
    std::array<SeasonMetrics, kSeasonCount> seasons;
    SeasonMetrics mean;
    std::vector<RunMetrics> runs;
};

/// Averages over runs and stations per season; the mean row averages the four seasons.
StudyMetrics compute_metrics(const Scenario& scenario, const std::vector<RunPair>& pairs);

} // namespace uavran
