#include "uavran/errors.hpp"
#include "uavran/sim_engine.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

using namespace uavran;

namespace {

Scenario constant_load_scenario(double daily_wh) {
    auto s = default_scenario();
    s.user_count = 0;
    for (auto& n : s.nodes) {
        n.airframe.total_mass_kg = 0.0;
        n.ris.element_count = 0;
        n.mimo.sleep_power_w = daily_wh / 24.0;
    }
    return s;
}

RunResult fake_run(bool with_res, const std::vector<long>& swaps_day0) {
    RunResult r;
    r.with_res = with_res;
    r.seed = 1;
    for (std::size_t i = 0; i < swaps_day0.size(); ++i) {
        r.node_ids.push_back(static_cast<int>(i));
        r.config.cells.push_back({static_cast<int>(i), false, 0, 0.0});
    }
    r.day_totals.assign(kSeasonCount, std::vector<NodeDayTotals>(swaps_day0.size()));
    for (std::size_t i = 0; i < swaps_day0.size(); ++i) {
        r.day_totals[0][i].swaps = swaps_day0[i];
        r.day_totals[0][i].consumed_wh = 100.0;
        r.day_totals[0][i].pv_used_wh = with_res ? 5.0 : 0.0;
    }
    return r;
}

} // namespace

TEST(Step, NightStepDrawsEverythingFromBattery) {
    NodeLoad load;
    load.hover_w = 120.0;
    load.mimo_w = 60.0;
    load.ris_w = 0.12;
    const NodeState s{fresh_battery(load.battery)};
    const auto [next, e] = step(s, load, {10, 0.0, 5.0}, true);
    EXPECT_EQ(e.t, 10);
    EXPECT_NEAR(e.consumed_wh, 180.12 / 60.0, 1e-12);
    EXPECT_EQ(e.harvested_wh, 0.0);
    EXPECT_NEAR(e.drawn_from_battery_wh, e.consumed_wh, 1e-12);
    EXPECT_NEAR(next.battery.soc_wh, 724.85 - 3.002, 1e-9);
}

TEST(Step, WithoutResIgnoresSunshine) {
    NodeLoad load;
    load.hover_w = 100.0;
    const NodeState s{fresh_battery(load.battery)};
    const auto [next, e] = step(s, load, {0, 1000.0, -6.25}, false);
    EXPECT_EQ(e.pv_power_w, 0.0);
    EXPECT_EQ(e.pv_used_wh, 0.0);
}

TEST(Step, MiddayHarvest) {
    NodeLoad load;
    load.hover_w = 60.0;
    const NodeState s{{300.0, 0}};
    const auto [next, e] = step(s, load, {0, 1000.0, -6.25}, true);
    EXPECT_EQ(e.pv_power_w, 108.0);
    EXPECT_NEAR(e.harvested_wh, 1.8, 1e-12);
    // 1.71 Wh accepted, 1 Wh consumed
    EXPECT_NEAR(e.pv_used_wh, 1.0, 1e-12);
    EXPECT_NEAR(e.drawn_from_battery_wh, 0.0, 1e-12);
    EXPECT_NEAR(next.battery.soc_wh, 300.71, 1e-9);
}

TEST(Simulation, ConstantLoadNeedsNineSwapsPerDay) {
    const auto s = constant_load_scenario(6550.0);
    const auto w = synth_study_weather(s, 0);
    const auto r = run_simulation(s, w, false, 0);
    for (const auto& day : r.day_totals) {
        for (const auto& n : day) {
            EXPECT_EQ(n.swaps, 9);
            EXPECT_NEAR(n.consumed_wh, 6550.0, 1e-6);
        }
    }
}

TEST(Simulation, ClosedFormSwapCount) {
    EXPECT_EQ(constant_load_day_swaps(6550.0, 724.85), 9);
    EXPECT_EQ(constant_load_day_swaps(100.0, 724.85), 0);
    EXPECT_EQ(constant_load_day_swaps(7300.0, 724.85), 10);
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> e(0.0, 20000.0);
    std::uniform_real_distribution<double> u(200.0, 2000.0);
    for (int i = 0; i < 50; ++i) {
        const double daily = e(gen);
        const double usable = u(gen);
        const double ratio = daily / usable;
        if (std::abs(ratio - std::round(ratio)) < 1e-6) continue;
        EXPECT_EQ(constant_load_day_swaps(daily, usable), static_cast<long>(std::floor(ratio)));
    }
}

TEST(Simulation, LedgerConservation) {
    auto s = default_scenario();
    s.user_count = 30;
    const auto w = synth_study_weather(s, 5);
    const auto r = run_simulation(s, w, true, 5, {.keep_ledger = true});
    ASSERT_EQ(r.ledger.size(), static_cast<std::size_t>(kStepsPerRun) * s.nodes.size());
    for (const auto& e : r.ledger) {
        ASSERT_NEAR(e.consumed_wh, e.drawn_from_battery_wh + e.pv_used_wh, 1e-9);
        ASSERT_NEAR(e.consumed_wh, e.hover_wh + e.mimo_wh + e.ris_wh, 1e-9);
        ASSERT_GE(e.soc_after_wh, 0.0);
        ASSERT_LE(e.soc_after_wh, 724.85 + 1e-9);
        ASSERT_GE(e.pv_wasted_wh, 0.0);
    }
}

TEST(Simulation, PairsShareDesignAndWeather) {
    const auto s = default_scenario();
    const auto w = synth_study_weather(s, 42);
    const auto a = run_simulation(s, w, false, 42);
    const auto b = run_simulation(s, w, true, 42);
    EXPECT_EQ(to_canonical_string(a.config), to_canonical_string(b.config));
    EXPECT_EQ(a.weather_digest, b.weather_digest);
    const auto m = compute_metrics(s, {{a, b}});
    for (const auto& season : m.seasons) EXPECT_LE(season.anuc_with_res, season.anuc_no_res);
}

TEST(Simulation, RejectsIncompleteWeather) {
    const auto s = default_scenario();
    auto w = synth_study_weather(s, 0);
    w.samples.pop_back();
    EXPECT_THROW(run_simulation(s, w, true, 0), ConfigError);
}

TEST(Simulation, ShadowingOnlyWhenEnabled) {
    auto s = default_scenario();
    EXPECT_TRUE(design_input(s, 3).shadowing_db.empty());
    s.radio.shadowing_sigma_db = 4.0;
    const auto in = design_input(s, 3);
    ASSERT_EQ(in.shadowing_db.size(), s.nodes.size());
    EXPECT_EQ(in.shadowing_db[0].size(), 100u);
    EXPECT_EQ(in.shadowing_db, design_input(s, 3).shadowing_db);
    EXPECT_EQ(in.users[17].position.x, design_input(default_scenario(), 3).users[17].position.x);
}

TEST(Metrics, AnucAveragesOverNodes) {
    const auto s = default_scenario();
    RunPair p{fake_run(false, {9, 9, 9, 10}), fake_run(true, {8, 8, 9, 9})};
    const auto m = compute_metrics(s, {p});
    EXPECT_DOUBLE_EQ(m.seasons[0].anuc_no_res, 9.25);
    EXPECT_DOUBLE_EQ(m.seasons[0].anuc_with_res, 8.5);
    EXPECT_DOUBLE_EQ(m.seasons[0].arec_percent, 5.0);
    EXPECT_DOUBLE_EQ(m.seasons[1].arec_percent, 0.0);
    EXPECT_DOUBLE_EQ(m.mean.anuc_no_res, 9.25 / 4.0);
    ASSERT_EQ(m.runs.size(), 1u);
    EXPECT_DOUBLE_EQ(m.runs[0].arec_percent, 5.0);
}

TEST(Metrics, MismatchedPairsRejected) {
    const auto s = default_scenario();
    auto b = fake_run(true, {1, 1});
    b.seed = 2;
    EXPECT_THROW(compute_metrics(s, {{fake_run(false, {1, 1}), b}}), ConfigError);
    auto c = fake_run(true, {1, 1});
    c.weather_digest = 99;
    EXPECT_THROW(compute_metrics(s, {{fake_run(false, {1, 1}), c}}), ConfigError);
    EXPECT_THROW(compute_metrics(s, {{fake_run(true, {1, 1}), fake_run(true, {1, 1})}}), ConfigError);
}
