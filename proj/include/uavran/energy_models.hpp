#pragma once

#include <map>
#include <utility>

namespace uavran {

inline constexpr double kStandardGravity = 9.80665; // m/s^2

/**
 * Multirotor airframe hovering on a tether. The PV canopy mass is not part
 * of total_mass.
 */
struct UavAirframe {
    double total_mass_kg = 2.35;
    int rotor_count = 4;
    double rotor_radius_m = 0.2;
    double air_density = 1.225; // kg/m^3
    double drive_efficiency = 0.7;
    double tether_efficiency = 0.95;
};

struct MimoSpec {
    int antenna_count = 64;
    double carrier_freq_mhz = 3500.0;
    double fixed_power_w = 20.0;
    double per_antenna_circuit_power_w = 1.5;
    double per_user_processing_power_w = 0.3;
    double pa_efficiency = 0.5;
    double max_tx_power_dbm = 40.0;
    double sleep_power_w = 5.0;
};

struct RisSpec {
    int element_count = 16;
    int phase_bits = 6;
    /// Power of one reflecting element keyed by phase resolution in bits.
    std::map<int, double> per_element_power_w{{3, 0.0015}, {4, 0.0045}, {5, 0.006}, {6, 0.0078}};
};

struct PvSpec {
    double rated_power_w = 120.0;
    double derating_factor = 0.9;
    double temp_coeff_per_c = -0.0035;
    double noct_c = 45.0;
    double stc_irradiance_wm2 = 1000.0;
    double stc_cell_temp_c = 25.0;
};

struct BatterySpec {
    double capacity_wh = 763.0;
    double charge_efficiency = 0.95;
    /// Share of a fresh battery spent flying to and from the charging station.
    double flight_reserve = 0.05;

    /// Energy a freshly swapped battery can deliver to the payload.
    [[nodiscard]] double usable_capacity_wh() const { return capacity_wh * (1.0 - flight_reserve); }
};

struct BatteryState {
    double soc_wh = 0.0;
    long swap_count = 0;
};

struct BatteryFlows {
    double drawn_from_battery_wh = 0.0;
    double pv_used_wh = 0.0;
    double pv_wasted_wh = 0.0;
    /// Post-efficiency charge that entered the battery this step.
    double accepted_wh = 0.0;
    /// Swaps triggered inside this step.
    long swaps = 0;
};

void validate(const UavAirframe& airframe);
void validate(const MimoSpec& spec);
void validate(const RisSpec& spec);
void validate(const PvSpec& spec);
void validate(const BatterySpec& spec);

/// Electrical power drawn through the tether while hovering (momentum theory), W.
double uav_hover_power(const UavAirframe& airframe);

/// Transceiver power, W. Throws ParameterError when tx_power_dbm exceeds the spec maximum.
double mimo_power(const MimoSpec& spec, bool active, int served_users, double tx_power_dbm);

double ris_power(const RisSpec& spec);

/// NOCT cell temperature model.
double cell_temperature(double ambient_c, double ghi_wm2, double noct_c);

/// PV output in W for the given irradiance and ambient temperature; never negative.
double pv_power(const PvSpec& spec, double ghi_wm2, double ambient_c);

/// Fresh battery as installed after a swap (flight reserve already spent).
BatteryState fresh_battery(const BatterySpec& spec);

/**
 * Advances one battery by one step.
 *
 * Harvest is accepted first (after charge efficiency, capped at the usable
 * capacity), then demand is subtracted. Each time the state of charge goes
 * negative the battery is swapped for a fresh one and the deficit carries
 * over. PV counts as used only up to the demand of the same step.
 */
std::pair<BatteryState, BatteryFlows> battery_step(const BatteryState& state, const BatterySpec& spec,
                                                   double demand_wh, double harvested_wh);

} // namespace uavran
