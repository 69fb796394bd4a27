#include "uavran/energy_models.hpp"
#include "uavran/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

using namespace uavran;

namespace {

UavAirframe reference_airframe() {
    UavAirframe a;
    a.total_mass_kg = 2.0;
    a.rotor_count = 4;
    a.rotor_radius_m = 0.2;
    a.air_density = 1.225;
    a.drive_efficiency = 0.7;
    a.tether_efficiency = 0.95;
    return a;
}

MimoSpec reference_mimo() {
    MimoSpec m;
    m.fixed_power_w = 20.0;
    m.per_antenna_circuit_power_w = 1.5;
    m.antenna_count = 64;
    m.per_user_processing_power_w = 0.3;
    m.pa_efficiency = 0.3;
    m.sleep_power_w = 5.0;
    return m;
}

BatterySpec battery_with_cap(double usable) {
    BatterySpec b;
    b.capacity_wh = usable / 0.95;
    b.flight_reserve = 0.05;
    b.charge_efficiency = 0.95;
    return b;
}

} // namespace

TEST(HoverPower, ZeroMassNeedsNoPower) {
    auto a = reference_airframe();
    a.total_mass_kg = 0.0;
    EXPECT_EQ(uav_hover_power(a), 0.0);
}

TEST(HoverPower, ReferenceAirframe) {
    // (2*9.80665)^1.5 / (0.7*sqrt(2*1.225*4*pi*0.04)) / 0.95, evaluated separately
    EXPECT_NEAR(uav_hover_power(reference_airframe()), 117.70269089292798, 1e-9);
    EXPECT_NEAR(uav_hover_power(reference_airframe()), 117.8, 0.15);
}

TEST(HoverPower, DoublingDiskAreaDividesBySqrtTwo) {
    auto a = reference_airframe();
    a.tether_efficiency = 1.0;
    const double before = uav_hover_power(a);
    a.rotor_count *= 2;
    const double after = uav_hover_power(a);
    EXPECT_NEAR(before, 111.81755634828157, 1e-9);
    EXPECT_NEAR(after, 79.06695234957877, 1e-9);
    EXPECT_NEAR(before / after, std::sqrt(2.0), 1e-12);
}

TEST(HoverPower, ScalesWithMassAndAreaOnRandomPairs) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> mass(0.5, 10.0);
    std::uniform_real_distribution<double> radius(0.05, 0.6);
    for (int i = 0; i < 200; ++i) {
        auto a = reference_airframe();
        a.total_mass_kg = mass(gen);
        a.rotor_radius_m = radius(gen);
        auto b = a;
        b.total_mass_kg = mass(gen);
        EXPECT_NEAR(uav_hover_power(b) / uav_hover_power(a), std::pow(b.total_mass_kg / a.total_mass_kg, 1.5),
                    1e-9 * std::pow(b.total_mass_kg / a.total_mass_kg, 1.5));
        auto c = a;
        c.rotor_radius_m = radius(gen);
        const double area_ratio = std::pow(c.rotor_radius_m / a.rotor_radius_m, 2.0);
        EXPECT_NEAR(uav_hover_power(c) / uav_hover_power(a), std::pow(area_ratio, -0.5),
                    1e-9 * std::pow(area_ratio, -0.5));
    }
}

TEST(HoverPower, RejectsZeroRotorArea) {
    auto a = reference_airframe();
    a.rotor_radius_m = 0.0;
    EXPECT_THROW(uav_hover_power(a), ParameterError);
    EXPECT_THROW(validate(a), ParameterError);
}

TEST(MimoPower, InactiveDrawsSleepPower) {
    EXPECT_EQ(mimo_power(reference_mimo(), false, 0, 40.0), 5.0);
}

TEST(MimoPower, ActiveIdleCircuitry) {
    EXPECT_DOUBLE_EQ(mimo_power(reference_mimo(), true, 0, -std::numeric_limits<double>::infinity()), 116.0);
}

TEST(MimoPower, ActiveLoaded) {
    EXPECT_NEAR(mimo_power(reference_mimo(), true, 10, 40.0), 152.33333333333334, 1e-9);
}

TEST(MimoPower, StrictlyIncreasingInUsersAndPower) {
    const auto m = reference_mimo();
    for (int k = 0; k < 20; ++k) EXPECT_LT(mimo_power(m, true, k, 30.0), mimo_power(m, true, k + 1, 30.0));
    for (double p = 0.0; p < 40.0; p += 1.0) EXPECT_LT(mimo_power(m, true, 3, p), mimo_power(m, true, 3, p + 1.0));
}

TEST(MimoPower, RejectsPowerAboveMaximum) {
    EXPECT_THROW(mimo_power(reference_mimo(), true, 1, 40.5), ParameterError);
}

TEST(RisPower, Examples) {
    RisSpec s;
    s.element_count = 0;
    EXPECT_EQ(ris_power(s), 0.0);
    s.element_count = 16;
    s.phase_bits = 6;
    EXPECT_NEAR(ris_power(s), 0.1248, 1e-12);
    s.phase_bits = 3;
    EXPECT_NEAR(ris_power(s), 0.024, 1e-12);
}

TEST(RisPower, UnknownBitWidth) {
    RisSpec s;
    s.phase_bits = 2;
    EXPECT_THROW(ris_power(s), ParameterError);
}

TEST(CellTemperature, Examples) {
    EXPECT_EQ(cell_temperature(17.5, 0.0, 45.0), 17.5);
    EXPECT_DOUBLE_EQ(cell_temperature(20.0, 800.0, 45.0), 45.0);
    EXPECT_DOUBLE_EQ(cell_temperature(10.0, 400.0, 44.0), 22.0);
}

TEST(PvPower, Examples) {
    PvSpec s;
    EXPECT_EQ(pv_power(s, 0.0, 30.0), 0.0);
    EXPECT_EQ(pv_power(s, 1000.0, -6.25), s.rated_power_w * s.derating_factor);
    EXPECT_NEAR(pv_power(s, 800.0, 20.0), 80.352, 1e-9);
}

TEST(PvPower, NeverNegative) {
    PvSpec s;
    s.temp_coeff_per_c = -0.05;
    EXPECT_EQ(pv_power(s, 1000.0, 60.0), 0.0);
}

TEST(Battery, IdleStepChangesNothing) {
    const auto spec = battery_with_cap(724.85);
    const BatteryState s{300.0, 2};
    const auto [next, flows] = battery_step(s, spec, 0.0, 0.0);
    EXPECT_EQ(next.soc_wh, 300.0);
    EXPECT_EQ(next.swap_count, 2);
    EXPECT_EQ(flows.drawn_from_battery_wh, 0.0);
    EXPECT_EQ(flows.pv_used_wh, 0.0);
    EXPECT_EQ(flows.pv_wasted_wh, 0.0);
}

TEST(Battery, SwapCarriesDeficit) {
    const auto spec = battery_with_cap(724.85);
    const auto [next, flows] = battery_step({10.0, 0}, spec, 15.0, 0.0);
    EXPECT_EQ(next.swap_count, 1);
    EXPECT_NEAR(next.soc_wh, 719.85, 1e-9);
    EXPECT_EQ(flows.drawn_from_battery_wh, 15.0);
}

TEST(Battery, SurplusHarvestIsWastedAfterEfficiency) {
    const auto spec = battery_with_cap(724.85);
    const auto [next, flows] = battery_step({720.0, 0}, spec, 0.0, 10.0);
    EXPECT_NEAR(next.soc_wh, 724.85, 1e-9);
    EXPECT_NEAR(flows.pv_wasted_wh, 4.65, 1e-9);
    EXPECT_NEAR(flows.accepted_wh, 4.85, 1e-9);
}

TEST(Battery, FreshBatteryHasReserveDeducted) {
    BatterySpec spec;
    EXPECT_NEAR(fresh_battery(spec).soc_wh, 724.85, 1e-9);
}

TEST(Battery, DemandAboveOneBatteryIsAConfigurationError) {
    const auto spec = battery_with_cap(100.0);
    EXPECT_THROW(battery_step({50.0, 0}, spec, 100.5, 0.0), ConfigError);
}

TEST(Battery, ConservationAndBoundsOnRandomSteps) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        BatterySpec spec;
        spec.capacity_wh = 50.0 + 1000.0 * u(gen);
        spec.charge_efficiency = 0.5 + 0.5 * u(gen);
        const double cap = spec.usable_capacity_wh();
        auto state = fresh_battery(spec);
        for (int step = 0; step < 500; ++step) {
            const double demand = cap * 0.2 * u(gen);
            const double harvest = cap * 0.2 * u(gen) * (u(gen) < 0.5 ? 1.0 : 0.0);
            const auto [next, f] = battery_step(state, spec, demand, harvest);
            ASSERT_NEAR(demand, f.drawn_from_battery_wh + f.pv_used_wh, 1e-9);
            ASSERT_NEAR(next.soc_wh - state.soc_wh, f.accepted_wh - demand + f.swaps * cap, 1e-9);
            ASSERT_NEAR(f.accepted_wh + f.pv_wasted_wh, harvest * spec.charge_efficiency, 1e-9);
            ASSERT_GE(next.soc_wh, 0.0);
            ASSERT_LE(next.soc_wh, cap + 1e-9);
            ASSERT_GE(f.drawn_from_battery_wh, 0.0);
            ASSERT_GE(f.pv_wasted_wh, 0.0);
            ASSERT_GE(next.swap_count, state.swap_count);
            state = next;
        }
    }
}

TEST(Validation, RejectsOutOfDomainSpecs) {
    PvSpec pv;
    pv.temp_coeff_per_c = 0.001;
    EXPECT_THROW(validate(pv), ParameterError);
    BatterySpec b;
    b.capacity_wh = 0.0;
    EXPECT_THROW(validate(b), ParameterError);
    MimoSpec m;
    m.pa_efficiency = 1.2;
    EXPECT_THROW(validate(m), ParameterError);
}
