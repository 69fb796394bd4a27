// uavran: tethered-UAV RAN energy-balance simulator.
//
//   uavran simulate --config scenario.json [--runs N] [--seed S] [--weather synth|file.csv] [--out dir]
//   uavran weather-synth --date 2022-06-21 [--lat 52.41] [--cloud 0.7] --out day.csv
//   uavran oracle --instance small.json
//   uavran oracle --daily-wh 6550 --usable-wh 724.85

#include "uavran/report.hpp"

#include <iostream>

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Energy balance of a 5G RAN served by tethered UAV base stations with PV panels"};
    app.require_subcommand(1);

    uavran::SimulateArgs sim;
    bool no_ledgers = false;
    auto* simulate = app.add_subcommand("simulate", "Run paired with/without-PV studies and write reports");
    simulate->add_option("--config", sim.config, "Scenario JSON file")->required();
    simulate->add_option("--runs", sim.runs, "Number of seeded runs (default: run_count from the config)");
    simulate->add_option("--seed", sim.seed, "Base seed; run r uses seed + r")->capture_default_str();
    simulate->add_option("--weather", sim.weather, "'synth' or a weather CSV path")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
    simulate->add_option("--jobs", sim.jobs, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_flag("--no-ledgers", no_ledgers, "Skip the per-step ledger CSV files");

    uavran::WeatherSynthArgs synth;
    auto* weather = app.add_subcommand("weather-synth", "Write one day of synthetic clear-sky weather");
    weather->add_option("--date", synth.date, "YYYY-MM-DD")->required();
    weather->add_option("--lat", synth.latitude_deg, "Latitude in degrees")->capture_default_str();
    weather->add_option("--cloud", synth.cloud_factor, "Clear-sky fraction in [0,1]")->capture_default_str();
    weather->add_option("--tmin", synth.temp_min_c, "Daily minimum temperature, C")->capture_default_str();
    weather->add_option("--tmax", synth.temp_max_c, "Daily maximum temperature, C")->capture_default_str();
    weather->add_option("--out", synth.out, "Output CSV path")->required();

    uavran::OracleArgs oracle;
    auto* check = app.add_subcommand("oracle", "Compare the greedy design with exhaustive search");
    check->add_option("--instance", oracle.instance, "Small instance JSON (<= 4 nodes, <= 10 users)");
    check->add_option("--daily-wh", oracle.daily_wh, "Constant daily load for the swap-count check");
    check->add_option("--usable-wh", oracle.usable_wh, "Usable battery energy for the swap-count check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? uavran::kExitOk : uavran::kExitUsage;
    }

    if (*simulate) {
        sim.write_ledgers = !no_ledgers;
        return uavran::cmd_simulate(sim, std::cerr);
    }
    if (*weather) return uavran::cmd_weather_synth(synth, std::cerr);
    return uavran::cmd_oracle(oracle, std::cout);
}
