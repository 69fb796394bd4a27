#include "uavran/energy_models.hpp"

#include "uavran/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace uavran {

namespace {

bool in_unit_interval(double v) { return v > 0.0 && v <= 1.0; }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

} // namespace

void validate(const UavAirframe& a) {
    if (!(a.total_mass_kg >= 0.0)) throw ParameterError("airframe.total_mass_kg must be >= 0");
    if (a.rotor_count < 1) throw ParameterError("airframe.rotor_count must be >= 1");
    if (!(a.rotor_radius_m > 0.0)) throw ParameterError("airframe.rotor_radius_m must be > 0");
    if (!(a.air_density > 0.0)) throw ParameterError("airframe.air_density must be > 0");
    if (!in_unit_interval(a.drive_efficiency)) throw ParameterError("airframe.drive_efficiency must be in (0,1]");
    if (!in_unit_interval(a.tether_efficiency)) throw ParameterError("airframe.tether_efficiency must be in (0,1]");
}

void validate(const MimoSpec& s) {
    if (s.antenna_count < 1) throw ParameterError("mimo.antenna_count must be >= 1");
    if (!(s.fixed_power_w >= 0.0) || !(s.per_antenna_circuit_power_w >= 0.0) ||
        !(s.per_user_processing_power_w >= 0.0) || !(s.sleep_power_w >= 0.0)) {
        throw ParameterError("mimo powers must be >= 0");
    }
    if (!in_unit_interval(s.pa_efficiency)) throw ParameterError("mimo.pa_efficiency must be in (0,1]");
    if (!std::isfinite(s.max_tx_power_dbm)) throw ParameterError("mimo.max_tx_power_dbm must be finite");
}

void validate(const RisSpec& s) {
    if (s.element_count < 0) throw ParameterError("ris.element_count must be >= 0");
    if (!s.per_element_power_w.contains(s.phase_bits)) {
        throw ParameterError("ris.phase_bits=" + std::to_string(s.phase_bits) + " has no per-element power entry");
    }
    for (const auto& [bits, p] : s.per_element_power_w) {
        if (!(p >= 0.0)) throw ParameterError("ris.per_element_power_w entries must be >= 0");
    }
}

void validate(const PvSpec& s) {
    if (!(s.rated_power_w >= 0.0)) throw ParameterError("pv.rated_power_w must be >= 0");
    if (!in_unit_interval(s.derating_factor)) throw ParameterError("pv.derating_factor must be in (0,1]");
    if (!(s.temp_coeff_per_c <= 0.0)) throw ParameterError("pv.temp_coeff_per_c must be <= 0");
    if (!(s.noct_c > 20.0)) throw ParameterError("pv.noct_c must be > 20");
    if (!(s.stc_irradiance_wm2 > 0.0)) throw ParameterError("pv.stc_irradiance_wm2 must be > 0");
}

void validate(const BatterySpec& s) {
    if (!(s.capacity_wh > 0.0)) throw ParameterError("battery.capacity_wh must be > 0");
    if (!in_unit_interval(s.charge_efficiency)) throw ParameterError("battery.charge_efficiency must be in (0,1]");
    if (!(s.flight_reserve >= 0.0 && s.flight_reserve < 1.0)) {
        throw ParameterError("battery.flight_reserve must be in [0,1)");
    }
}

double uav_hover_power(const UavAirframe& a) {
    const double thrust = a.total_mass_kg * kStandardGravity;
    const double disk_area = a.rotor_count * std::numbers::pi * a.rotor_radius_m * a.rotor_radius_m;
    const double induced = std::pow(thrust, 1.5) / (a.drive_efficiency * std::sqrt(2.0 * a.air_density * disk_area));
    const double drawn = induced / a.tether_efficiency;
    if (!std::isfinite(drawn)) throw ParameterError("hover power is not finite (check rotor area and efficiencies)");
    return drawn;
}

double mimo_power(const MimoSpec& s, bool active, int served_users, double tx_power_dbm) {
    if (served_users < 0) throw ParameterError("served user count must be >= 0");
    if (tx_power_dbm > s.max_tx_power_dbm) {
        throw ParameterError("tx power " + std::to_string(tx_power_dbm) + " dBm exceeds max " +
                             std::to_string(s.max_tx_power_dbm) + " dBm");
    }
    if (!active) return s.sleep_power_w;
    const double radiated = std::isinf(tx_power_dbm) ? 0.0 : dbm_to_watts(tx_power_dbm);
    return s.fixed_power_w + s.antenna_count * s.per_antenna_circuit_power_w +
           served_users * s.per_user_processing_power_w + radiated / s.pa_efficiency;
}

double ris_power(const RisSpec& s) {
    const auto it = s.per_element_power_w.find(s.phase_bits);
    if (it == s.per_element_power_w.end()) {
        throw ParameterError("ris.phase_bits=" + std::to_string(s.phase_bits) + " has no per-element power entry");
    }
    return s.element_count * it->second;
}

double cell_temperature(double ambient_c, double ghi_wm2, double noct_c) {
    return ambient_c + ghi_wm2 * (noct_c - 20.0) / 800.0;
}

double pv_power(const PvSpec& s, double ghi_wm2, double ambient_c) {
    if (ghi_wm2 <= 0.0) return 0.0;
    const double t_cell = cell_temperature(ambient_c, ghi_wm2, s.noct_c);
    const double p = s.rated_power_w * s.derating_factor * (ghi_wm2 / s.stc_irradiance_wm2) *
                     (1.0 + s.temp_coeff_per_c * (t_cell - s.stc_cell_temp_c));
    return std::max(0.0, p);
}

BatteryState fresh_battery(const BatterySpec& spec) { return {spec.usable_capacity_wh(), 0}; }

std::pair<BatteryState, BatteryFlows> battery_step(const BatteryState& state, const BatterySpec& spec,
                                                   double demand_wh, double harvested_wh) {
    const double cap = spec.usable_capacity_wh();
    if (!(demand_wh >= 0.0) || !(harvested_wh >= 0.0)) {
        throw ParameterError("battery_step needs non-negative demand and harvest");
    }
    if (demand_wh > cap) {
        throw ConfigError("per-step demand " + std::to_string(demand_wh) + " Wh exceeds usable battery capacity " +
                          std::to_string(cap) + " Wh");
    }

    BatteryFlows flows;
    BatteryState next = state;

    const double charge_in = harvested_wh * spec.charge_efficiency;
    const double headroom = std::max(0.0, cap - next.soc_wh);
    flows.accepted_wh = std::min(charge_in, headroom);
    flows.pv_wasted_wh = charge_in - flows.accepted_wh;
    next.soc_wh += flows.accepted_wh;

    flows.pv_used_wh = std::min(flows.accepted_wh, demand_wh);
    flows.drawn_from_battery_wh = demand_wh - flows.pv_used_wh;

    next.soc_wh -= demand_wh;
    while (next.soc_wh < 0.0) {
        next.soc_wh += cap;
        ++flows.swaps;
    }
    next.swap_count += flows.swaps;
    return {next, flows};
}

} // namespace uavran
