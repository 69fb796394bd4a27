#include "uavran/network_design.hpp"

#include "uavran/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace uavran {

namespace {

/// Node and user indices of `input` sorted by id.
struct SortedView {
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> users;
};

SortedView sorted_view(const DesignInput& input) {
    SortedView v;
    v.nodes.resize(input.nodes.size());
    v.users.resize(input.users.size());
    std::iota(v.nodes.begin(), v.nodes.end(), 0);
    std::iota(v.users.begin(), v.users.end(), 0);
    std::sort(v.nodes.begin(), v.nodes.end(),
              [&](auto a, auto b) { return input.nodes[a].id < input.nodes[b].id; });
    std::sort(v.users.begin(), v.users.end(),
              [&](auto a, auto b) { return input.users[a].id < input.users[b].id; });
    for (std::size_t i = 1; i < v.nodes.size(); ++i) {
        if (input.nodes[v.nodes[i]].id == input.nodes[v.nodes[i - 1]].id) {
            throw ConfigError(fmt::format("duplicate node id {}", input.nodes[v.nodes[i]].id));
        }
    }
    for (std::size_t i = 1; i < v.users.size(); ++i) {
        if (input.users[v.users[i]].id == input.users[v.users[i - 1]].id) {
            throw ConfigError(fmt::format("duplicate user id {}", input.users[v.users[i]].id));
        }
    }
    return v;
}

double shadowing(const DesignInput& input, std::size_t node, std::size_t user) {
    if (input.shadowing_db.empty()) return 0.0;
    return input.shadowing_db.at(node).at(user);
}

LinkBudget evaluate_link(const DesignInput& input, std::size_t node, std::size_t user, double tx_dbm) {
    return link_feasible(input.nodes[node].position, input.users[user].position, tx_dbm, input.radio, input.demand,
                         shadowing(input, node, user));
}

std::vector<CellConfig> all_inactive(const DesignInput& input, const SortedView& view) {
    std::vector<CellConfig> cells;
    cells.reserve(view.nodes.size());
    for (auto n : view.nodes) cells.push_back({input.nodes[n].id, false, 0, 0.0});
    return cells;
}

NetworkConfig finalize(const DesignInput& input, std::vector<CellConfig> cells, Assignment assignment) {
    NetworkConfig out;
    out.total_power_w = total_transceiver_power(input, cells, assignment);
    out.cells = std::move(cells);
    out.covered_count = static_cast<int>(assignment.links.size());
    out.assignment = std::move(assignment);
    return out;
}

} // namespace

FeasibilityTable::FeasibilityTable(std::vector<CandidateRow> rows, std::size_t node_count, std::size_t user_count,
                                   std::size_t level_count)
    : rows_(std::move(rows)), nodes_(node_count), users_(user_count), levels_(level_count) {}

const CandidateRow& FeasibilityTable::at(std::size_t node_idx, std::size_t user_idx, std::size_t level) const {
    return rows_.at((node_idx * users_ + user_idx) * levels_ + level);
}

const CellConfig& NetworkConfig::cell(int node_id) const {
    const auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& c) { return c.node_id == node_id; });
    if (it == cells.end()) throw std::out_of_range(fmt::format("no cell for node {}", node_id));
    return *it;
}

int NetworkConfig::served_users(int node_id) const {
    return static_cast<int>(std::count_if(assignment.links.begin(), assignment.links.end(),
                                          [&](const auto& kv) { return kv.second.node_id == node_id; }));
}

FeasibilityTable enumerate_candidates(const DesignInput& input) {
    const auto view = sorted_view(input);
    const auto& levels = input.radio.power_levels_dbm;
    std::vector<CandidateRow> rows;
    rows.reserve(view.nodes.size() * view.users.size() * levels.size());
    for (auto n : view.nodes) {
        for (auto u : view.users) {
            for (std::size_t l = 0; l < levels.size(); ++l) {
                rows.push_back({input.nodes[n].id, input.users[u].id, static_cast<int>(l), levels[l],
                                evaluate_link(input, n, u, levels[l])});
            }
        }
    }
    return {std::move(rows), view.nodes.size(), view.users.size(), levels.size()};
}

double total_transceiver_power(const DesignInput& input, const std::vector<CellConfig>& cells,
                               const Assignment& assignment) {
    std::map<int, int> served;
    for (const auto& [user, link] : assignment.links) ++served[link.node_id];
    double total = 0.0;
    for (const auto& cell : cells) {
        const auto node = std::find_if(input.nodes.begin(), input.nodes.end(),
                                       [&](const auto& n) { return n.id == cell.node_id; });
        if (node == input.nodes.end()) throw ConfigError(fmt::format("cell refers to unknown node {}", cell.node_id));
        const auto it = served.find(cell.node_id);
        total += mimo_power(node->mimo, cell.active, it == served.end() ? 0 : it->second, cell.tx_power_dbm);
    }
    return total;
}

NetworkConfig greedy_design(const DesignInput& input) {
    const auto view = sorted_view(input);
    const auto table = enumerate_candidates(input);
    const auto& levels = input.radio.power_levels_dbm;
    const std::size_t max_level = levels.size() - 1;
    const int total_prbs = input.radio.total_prbs;

    // Every transceiver starts at maximum power; the level is revisited during trimming.
    auto cells = all_inactive(input, view);
    for (auto& c : cells) {
        c.level = static_cast<int>(max_level);
        c.tx_power_dbm = levels[max_level];
    }

    Assignment assignment;
    std::vector<bool> assigned(view.users.size(), false);

    // Most users an activation of (node, level) can take: cheapest links first, user_id breaking ties.
    auto pack = [&](std::size_t ni, std::size_t level, int& load) {
        std::vector<std::size_t> order;
        for (std::size_t ui = 0; ui < view.users.size(); ++ui) {
            if (!assigned[ui] && table.at(ni, ui, level).link.feasible) order.push_back(ui);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return table.at(ni, a, level).link.prbs() < table.at(ni, b, level).link.prbs();
        });
        std::vector<std::size_t> taken;
        load = 0;
        for (auto ui : order) {
            const int prbs = table.at(ni, ui, level).link.prbs();
            if (load + prbs > total_prbs) break;
            taken.push_back(ui);
            load += prbs;
        }
        std::sort(taken.begin(), taken.end());
        return taken;
    };

    for (;;) {
        std::size_t best_node = 0;
        std::size_t best_level = 0;
        std::size_t best_count = 0;
        double best_added = 0.0;
        for (std::size_t ni = 0; ni < view.nodes.size(); ++ni) {
            if (cells[ni].active) continue;
            const auto& mimo = input.nodes[view.nodes[ni]].mimo;
            for (std::size_t l = 0; l < levels.size(); ++l) {
                int load = 0;
                const auto count = pack(ni, l, load).size();
                if (count == 0) continue;
                const double added =
                    mimo_power(mimo, true, static_cast<int>(count), levels[l]) - mimo_power(mimo, false, 0, levels[l]);
                // Nodes are scanned in ascending id, so a strict comparison keeps the lower id on ties.
                if (count > best_count || (count == best_count && added < best_added)) {
                    best_node = ni;
                    best_level = l;
                    best_count = count;
                    best_added = added;
                }
            }
        }
        if (best_count == 0) break;

        int load = 0;
        const auto taken = pack(best_node, best_level, load);
        auto& cell = cells[best_node];
        cell.active = true;
        cell.level = static_cast<int>(best_level);
        cell.tx_power_dbm = levels[best_level];
        assignment.prb_load[cell.node_id] = load;
        for (auto ui : taken) {
            assigned[ui] = true;
            const auto& link = table.at(best_node, ui, best_level).link;
            assignment.links[input.users[view.users[ui]].id] = {cell.node_id, link.prbs_dl, link.prbs_ul};
        }
    }

    // Trim: lowest level that still closes every assigned budget within the PRB budget.
    for (std::size_t ni = 0; ni < cells.size(); ++ni) {
        auto& cell = cells[ni];
        if (!cell.active) continue;
        std::vector<std::size_t> mine;
        for (std::size_t ui = 0; ui < view.users.size(); ++ui) {
            const auto it = assignment.links.find(input.users[view.users[ui]].id);
            if (it != assignment.links.end() && it->second.node_id == cell.node_id) mine.push_back(ui);
        }
        for (std::size_t l = 0; l < static_cast<std::size_t>(cell.level); ++l) {
            int load = 0;
            bool ok = true;
            for (auto ui : mine) {
                const auto& link = table.at(ni, ui, l).link;
                ok = ok && link.feasible;
                load += link.prbs();
            }
            if (!ok || load > total_prbs) continue;
            cell.level = static_cast<int>(l);
            cell.tx_power_dbm = levels[l];
            assignment.prb_load[cell.node_id] = load;
            for (auto ui : mine) {
                const auto& link = table.at(ni, ui, l).link;
                assignment.links[input.users[view.users[ui]].id] = {cell.node_id, link.prbs_dl, link.prbs_ul};
            }
            break;
        }
    }

    for (auto& cell : cells) {
        if (cell.active && !assignment.prb_load.contains(cell.node_id)) cell.active = false;
    }
    for (auto& cell : cells) {
        if (!cell.active) {
            cell.level = 0;
            cell.tx_power_dbm = 0.0;
        }
    }
    return finalize(input, std::move(cells), std::move(assignment));
}

NetworkConfig brute_force_design(const DesignInput& input) {
    if (input.nodes.size() > kBruteForceMaxNodes || input.users.size() > kBruteForceMaxUsers) {
        throw SizeError(fmt::format("instance too large for exhaustive search ({} nodes, {} users; limits {} and {})",
                                    input.nodes.size(), input.users.size(), kBruteForceMaxNodes,
                                    kBruteForceMaxUsers));
    }
    const auto view = sorted_view(input);
    const auto table = enumerate_candidates(input);
    const auto& levels = input.radio.power_levels_dbm;
    const std::size_t n_nodes = view.nodes.size();
    const std::size_t n_users = view.users.size();
    const int total_prbs = input.radio.total_prbs;

    NetworkConfig best = finalize(input, all_inactive(input, view), {});

    // state[ni]: 0 = off, l+1 = active at level l
    std::vector<std::size_t> state(n_nodes, 0);
    for (;;) {
        auto cells = all_inactive(input, view);
        double base_power = 0.0;
        for (std::size_t ni = 0; ni < n_nodes; ++ni) {
            const auto& mimo = input.nodes[view.nodes[ni]].mimo;
            if (state[ni] > 0) {
                cells[ni].active = true;
                cells[ni].level = static_cast<int>(state[ni] - 1);
                cells[ni].tx_power_dbm = levels[state[ni] - 1];
                base_power += mimo_power(mimo, true, 0, cells[ni].tx_power_dbm);
            } else {
                base_power += mimo_power(mimo, false, 0, 0.0);
            }
        }

        // Depth-first matching: maximize covered users, then minimize per-user processing power.
        std::vector<int> load(n_nodes, 0);
        std::vector<int> choice(n_users, -1);
        std::vector<int> best_choice(n_users, -1);
        int best_cov = -1;
        double best_cost = 0.0;
        auto dfs = [&](auto&& self, std::size_t ui, int cov, double cost) -> void {
            const int remaining = static_cast<int>(n_users - ui);
            if (cov + remaining < best_cov) return;
            if (ui == n_users) {
                if (cov > best_cov || (cov == best_cov && cost < best_cost)) {
                    best_cov = cov;
                    best_cost = cost;
                    best_choice = choice;
                }
                return;
            }
            for (std::size_t ni = 0; ni < n_nodes; ++ni) {
                if (state[ni] == 0) continue;
                const auto& link = table.at(ni, ui, state[ni] - 1).link;
                if (!link.feasible || load[ni] + link.prbs() > total_prbs) continue;
                load[ni] += link.prbs();
                choice[ui] = static_cast<int>(ni);
                self(self, ui + 1, cov + 1,
                     cost + input.nodes[view.nodes[ni]].mimo.per_user_processing_power_w);
                load[ni] -= link.prbs();
                choice[ui] = -1;
            }
            self(self, ui + 1, cov, cost);
        };
        dfs(dfs, 0, 0, 0.0);

        const double power = base_power + best_cost;
        if (best_cov > best.covered_count || (best_cov == best.covered_count && power < best.total_power_w)) {
            Assignment a;
            for (std::size_t ui = 0; ui < n_users; ++ui) {
                if (best_choice[ui] < 0) continue;
                const auto ni = static_cast<std::size_t>(best_choice[ui]);
                const auto& link = table.at(ni, ui, state[ni] - 1).link;
                a.links[input.users[view.users[ui]].id] = {cells[ni].node_id, link.prbs_dl, link.prbs_ul};
                a.prb_load[cells[ni].node_id] += link.prbs();
            }
            for (std::size_t ni = 0; ni < n_nodes; ++ni) {
                if (cells[ni].active && !a.prb_load.contains(cells[ni].node_id)) a.prb_load[cells[ni].node_id] = 0;
            }
            best = finalize(input, std::move(cells), std::move(a));
        }

        // next configuration in mixed-radix order
        std::size_t k = 0;
        while (k < n_nodes && ++state[k] > levels.size()) state[k++] = 0;
        if (k == n_nodes) break;
    }
    return best;
}

std::optional<std::string> check_feasibility(const DesignInput& input, const NetworkConfig& config) {
    const auto view = sorted_view(input);
    const auto& levels = input.radio.power_levels_dbm;
    if (config.cells.size() != input.nodes.size()) return "cell count differs from node count";

    std::map<int, std::size_t> node_index;
    for (auto n : view.nodes) node_index[input.nodes[n].id] = n;
    std::map<int, std::size_t> user_index;
    for (auto u : view.users) user_index[input.users[u].id] = u;

    std::map<int, const CellConfig*> cell_of;
    for (const auto& c : config.cells) {
        if (!node_index.contains(c.node_id)) return fmt::format("cell for unknown node {}", c.node_id);
        cell_of[c.node_id] = &c;
        if (c.active) {
            if (c.level < 0 || static_cast<std::size_t>(c.level) >= levels.size()) {
                return fmt::format("node {} has invalid level {}", c.node_id, c.level);
            }
            if (c.tx_power_dbm != levels[static_cast<std::size_t>(c.level)]) {
                return fmt::format("node {} tx power does not match its level", c.node_id);
            }
        }
    }

    std::map<int, int> load;
    for (const auto& [uid, link] : config.assignment.links) {
        if (!user_index.contains(uid)) return fmt::format("unknown user {}", uid);
        const auto cit = cell_of.find(link.node_id);
        if (cit == cell_of.end() || !cit->second->active) {
            return fmt::format("user {} assigned to inactive node {}", uid, link.node_id);
        }
        const auto budget =
            evaluate_link(input, node_index[link.node_id], user_index[uid], cit->second->tx_power_dbm);
        if (!budget.feasible) return fmt::format("user {} link to node {} is infeasible", uid, link.node_id);
        if (budget.prbs_dl != link.prbs_dl || budget.prbs_ul != link.prbs_ul) {
            return fmt::format("user {} PRB counts do not match its link budget", uid);
        }
        load[link.node_id] += budget.prbs();
    }
    for (const auto& [nid, prbs] : load) {
        if (prbs > input.radio.total_prbs) return fmt::format("node {} exceeds PRB capacity ({})", nid, prbs);
        const auto it = config.assignment.prb_load.find(nid);
        if (it == config.assignment.prb_load.end() || it->second != prbs) {
            return fmt::format("node {} PRB load total is inconsistent", nid);
        }
    }
    if (config.covered_count != static_cast<int>(config.assignment.links.size())) {
        return "covered_count differs from assignment size";
    }
    const double power = total_transceiver_power(input, config.cells, config.assignment);
    if (std::abs(power - config.total_power_w) > 1e-9 * std::max(1.0, power)) return "total_power_w is inconsistent";
    return std::nullopt;
}

std::optional<std::string> check_local_minimality(const DesignInput& input, const NetworkConfig& config) {
    const auto view = sorted_view(input);
    std::map<int, std::size_t> node_index;
    for (auto n : view.nodes) node_index[input.nodes[n].id] = n;
    std::map<int, std::size_t> user_index;
    for (auto u : view.users) user_index[input.users[u].id] = u;

    for (const auto& cell : config.cells) {
        if (!cell.active) continue;
        std::vector<int> mine;
        for (const auto& [uid, link] : config.assignment.links) {
            if (link.node_id == cell.node_id) mine.push_back(uid);
        }
        if (mine.empty()) return fmt::format("node {} is active but serves nobody", cell.node_id);
        if (cell.level == 0) continue;
        const double lower = input.radio.power_levels_dbm[static_cast<std::size_t>(cell.level - 1)];
        int load = 0;
        bool ok = true;
        for (int uid : mine) {
            const auto b = evaluate_link(input, node_index[cell.node_id], user_index[uid], lower);
            ok = ok && b.feasible;
            load += b.prbs();
        }
        if (ok && load <= input.radio.total_prbs) {
            return fmt::format("node {} could drop to {} dBm without losing users", cell.node_id, lower);
        }
    }
    return std::nullopt;
}

std::string to_canonical_string(const NetworkConfig& config) {
    std::ostringstream os;
    for (const auto& c : config.cells) {
        os << "cell " << c.node_id << ' ' << c.active << ' ' << c.level << ' ' << fmt::format("{:.17g}", c.tx_power_dbm)
           << '\n';
    }
    for (const auto& [uid, link] : config.assignment.links) {
        os << "link " << uid << ' ' << link.node_id << ' ' << link.prbs_dl << ' ' << link.prbs_ul << '\n';
    }
    for (const auto& [nid, load] : config.assignment.prb_load) os << "load " << nid << ' ' << load << '\n';
    os << "covered " << config.covered_count << '\n' << fmt::format("power {:.17g}\n", config.total_power_w);
    return os.str();
}

} // namespace uavran
