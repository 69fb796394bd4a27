#include "uavran/radio_link.hpp"

#include "uavran/errors.hpp"

#include <algorithm>
#include <cmath>

namespace uavran {

namespace {
constexpr double kThermalNoiseDbmPerHz = -174.0;
constexpr double kMinDistanceM = 1.0;
// Absorbs representation error when the rate is an exact multiple of a PRB's capacity.
constexpr double kCeilSlack = 1e-9;
} // namespace

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void validate(const RadioParams& p, double max_tx_power_dbm) {
    if (!(p.pathloss_exponent >= 2.0)) throw ParameterError("radio.pathloss_exponent must be >= 2");
    if (p.total_prbs < 1) throw ParameterError("radio.total_prbs must be >= 1");
    if (!(p.bandwidth_mhz > 0.0) || !(p.prb_bandwidth_khz > 0.0)) {
        throw ParameterError("radio bandwidths must be > 0");
    }
    if (!(p.se_cap > 0.0)) throw ParameterError("radio.se_cap must be > 0");
    if (!(p.shadowing_sigma_db >= 0.0)) throw ParameterError("radio.shadowing_sigma_db must be >= 0");
    if (p.power_levels_dbm.empty()) throw ParameterError("radio.power_levels_dbm must not be empty");
    if (!std::is_sorted(p.power_levels_dbm.begin(), p.power_levels_dbm.end()) ||
        std::adjacent_find(p.power_levels_dbm.begin(), p.power_levels_dbm.end()) != p.power_levels_dbm.end()) {
        throw ParameterError("radio.power_levels_dbm must be strictly increasing");
    }
    if (p.power_levels_dbm.back() != max_tx_power_dbm) {
        throw ParameterError("highest radio.power_levels_dbm entry must equal mimo.max_tx_power_dbm");
    }
}

double path_loss(const Position& a, const Position& b, const RadioParams& params) {
    const double d = std::max(kMinDistanceM, distance(a, b));
    return params.reference_loss_at_1m_db + 10.0 * params.pathloss_exponent * std::log10(d);
}

double noise_power_dbm(const RadioParams& params) {
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(params.bandwidth_mhz * 1e6) + params.noise_figure_db;
}

double snr(double tx_dbm, double path_loss_db, const RadioParams& params) {
    return tx_dbm + params.antenna_gain_dbi - path_loss_db - noise_power_dbm(params);
}

double spectral_efficiency(double snr_db, const RadioParams& params) {
    return std::min(params.se_cap, std::log2(1.0 + std::pow(10.0, snr_db / 10.0)));
}

std::optional<int> required_prbs(double rate_mbps, double se, const RadioParams& params) {
    if (!(se > 0.0)) return std::nullopt;
    if (rate_mbps <= 0.0) return 0;
    const double per_prb_mbps = se * params.prb_bandwidth_khz / 1000.0;
    const double prbs = std::ceil(rate_mbps / per_prb_mbps - kCeilSlack);
    // saturate far beyond any carrier's PRB count
    return prbs > 1e8 ? 100'000'000 : static_cast<int>(prbs);
}

LinkBudget link_feasible(const Position& node, const Position& user, double tx_dbm, const RadioParams& params,
                         const LinkDemand& demand, double shadowing_db) {
    LinkBudget out;
    const double link_snr = snr(tx_dbm, path_loss(node, user, params) + shadowing_db, params);
    const double se = spectral_efficiency(link_snr, params);
    const auto dl = required_prbs(demand.dl_mbps, se, params);
    const auto ul = required_prbs(demand.ul_mbps, se, params);
    if (!dl || !ul) return out;
    out.prbs_dl = *dl;
    out.prbs_ul = *ul;
    out.feasible = link_snr >= params.min_snr_db && out.prbs() <= params.total_prbs;
    return out;
}

} // namespace uavran
