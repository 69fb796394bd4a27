#pragma once

#include <optional>
#include <vector>

namespace uavran {

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Position& a, const Position& b);

/// Noise-limited log-distance link budget parameters.
struct RadioParams {
    double pathloss_exponent = 2.9;
    double reference_loss_at_1m_db = 43.3;
    double bandwidth_mhz = 100.0;
    double prb_bandwidth_khz = 360.0;
    int total_prbs = 273;
    double noise_figure_db = 9.0;
    double antenna_gain_dbi = 8.0;
    double min_snr_db = -6.0;
    double se_cap = 7.8; // bit/s/Hz
    std::vector<double> power_levels_dbm{28.0, 34.0, 40.0};
    /// Log-normal shadowing standard deviation; 0 disables shadowing.
    double shadowing_sigma_db = 0.0;
};

/// Throws ParameterError. max_tx_power_dbm must equal the highest power level.
void validate(const RadioParams& params, double max_tx_power_dbm);

double path_loss(const Position& a, const Position& b, const RadioParams& params);

/// Thermal noise over the channel bandwidth plus the receiver noise figure, dBm.
double noise_power_dbm(const RadioParams& params);

double snr(double tx_dbm, double path_loss_db, const RadioParams& params);

double spectral_efficiency(double snr_db, const RadioParams& params);

/// PRBs to carry rate_mbps at the given spectral efficiency; nullopt when se <= 0.
std::optional<int> required_prbs(double rate_mbps, double se, const RadioParams& params);

struct LinkDemand {
    double dl_mbps = 100.0;
    double ul_mbps = 25.0;
};

struct LinkBudget {
    bool feasible = false;
    int prbs_dl = 0;
    int prbs_ul = 0;

    [[nodiscard]] int prbs() const { return prbs_dl + prbs_ul; }
};

/// shadowing_db is added to the path loss of this particular link.
LinkBudget link_feasible(const Position& node, const Position& user, double tx_dbm, const RadioParams& params,
                         const LinkDemand& demand, double shadowing_db = 0.0);

} // namespace uavran
