#pragma once

#include "uavran/energy_models.hpp"
#include "uavran/radio_link.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uavran {

struct DesignNode {
    int id = 0;
    Position position;
    MimoSpec mimo;
};

struct User {
    int id = 0;
    Position position;
};

/**
 * Everything the cell-activation problem depends on. When present,
 * shadowing_db[node_index][user_index] is added to that link's path loss;
 * indices follow the order of `nodes` and `users`.
 */
struct DesignInput {
    std::vector<DesignNode> nodes;
    std::vector<User> users;
    RadioParams radio;
    LinkDemand demand;
    std::vector<std::vector<double>> shadowing_db;
};

struct CandidateRow {
    int node_id = 0;
    int user_id = 0;
    int level = 0;
    double tx_power_dbm = 0.0;
    LinkBudget link;
};

/// Link budget for every (node, user, power level), ordered by (node_id, user_id, level).
class FeasibilityTable {
public:
    FeasibilityTable() = default;
    FeasibilityTable(std::vector<CandidateRow> rows, std::size_t node_count, std::size_t user_count,
                     std::size_t level_count);

    [[nodiscard]] const std::vector<CandidateRow>& rows() const { return rows_; }
    /// Indices are positions in the id-sorted node and user lists.
    [[nodiscard]] const CandidateRow& at(std::size_t node_idx, std::size_t user_idx, std::size_t level) const;
    [[nodiscard]] std::size_t node_count() const { return nodes_; }
    [[nodiscard]] std::size_t user_count() const { return users_; }
    [[nodiscard]] std::size_t level_count() const { return levels_; }

private:
    std::vector<CandidateRow> rows_;
    std::size_t nodes_ = 0;
    std::size_t users_ = 0;
    std::size_t levels_ = 0;
};

struct CellConfig {
    int node_id = 0;
    bool active = false;
    /// Index into RadioParams::power_levels_dbm; meaningful only when active.
    int level = 0;
    double tx_power_dbm = 0.0;
};

struct UserLink {
    int node_id = 0;
    int prbs_dl = 0;
    int prbs_ul = 0;
};

struct Assignment {
    std::map<int, UserLink> links;  // user_id -> serving link
    std::map<int, int> prb_load;    // node_id -> PRBs in use (active nodes only)
};

struct NetworkConfig {
    std::vector<CellConfig> cells;  // ascending node_id
    Assignment assignment;
    int covered_count = 0;
    /// Sum of transceiver power over all nodes (sleep power for inactive ones), W.
    double total_power_w = 0.0;

    [[nodiscard]] const CellConfig& cell(int node_id) const;
    [[nodiscard]] int served_users(int node_id) const;
};

FeasibilityTable enumerate_candidates(const DesignInput& input);

/// Greedy cell activation followed by per-cell power trimming.
NetworkConfig greedy_design(const DesignInput& input);

inline constexpr std::size_t kBruteForceMaxNodes = 4;
inline constexpr std::size_t kBruteForceMaxUsers = 10;

/// Exhaustive search: maximum coverage, then minimum total power. Throws SizeError on large inputs.
NetworkConfig brute_force_design(const DesignInput& input);

/// Transceiver power of every node under `cells` with `assignment` user counts.
double total_transceiver_power(const DesignInput& input, const std::vector<CellConfig>& cells,
                               const Assignment& assignment);

/// Returns a description of the first violated Assignment invariant, or nullopt.
std::optional<std::string> check_feasibility(const DesignInput& input, const NetworkConfig& config);

/// Returns a description of a single-cell move that keeps coverage and feasibility, or nullopt.
std::optional<std::string> check_local_minimality(const DesignInput& input, const NetworkConfig& config);

/// Canonical text form; equal configs serialize identically.
std::string to_canonical_string(const NetworkConfig& config);

} // namespace uavran
