#include "hsmcast/policies.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>
#include <stdexcept>
#include <string>

#include "hsmcast/errors.hpp"

namespace hsmcast {

std::string_view to_string(Policy p) noexcept
{
    switch (p) {
    case Policy::SingleGroup: return "sg";
    case Policy::GroupBased: return "gb";
    case Policy::EnhancedGroupBased: return "egb";
    }
    return "?";
}

Policy parse_policy(std::string_view s)
{
    if (s == "sg") return Policy::SingleGroup;
    if (s == "gb") return Policy::GroupBased;
    if (s == "egb") return Policy::EnhancedGroupBased;
    throw ConfigError("unknown policy '" + std::string(s) + "'");
}

namespace {

void require_users(const std::vector<UserRecord>& users)
{
    if (users.empty()) throw std::domain_error("multicast group is empty");
}

int lowest_occupied(const std::vector<int>& counts)
{
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0) return static_cast<int>(k) + 1;
    }
    throw std::domain_error("multicast group is empty");
}

}  // namespace

SubgroupPlan make_plan(Policy policy, const std::vector<UserRecord>& users, const SubgroupConfig& config,
                       const CqiTable& table, int code_budget)
{
    SubgroupPlan out;
    out.policy = policy;
    out.config = config;
    out.code_budget = code_budget;
    out.report = gdi(users, config, table);

    std::vector<int> served(static_cast<std::size_t>(table.n_cqi()) + 1, 0);
    out.assignment.reserve(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
        int level = 0;
        for (int j = users[i].cqi; j >= 1; --j) {
            if (config.enabled(j)) {
                level = j;
                break;
            }
        }
        out.assignment.emplace_back(users[i].user_id, level);
        ++served[static_cast<std::size_t>(level)];
    }
    for (int k : config.enabled_levels()) {
        out.per_level.push_back({k, table.rate_kbps(k), table.codes(k), served[static_cast<std::size_t>(k)]});
    }
    return out;
}

SubgroupPlan single_group(const std::vector<UserRecord>& users, const CqiTable& table)
{
    require_users(users);
    const int floor_level = lowest_occupied(users_per_level(users, table.n_cqi()));
    SubgroupConfig config(table.n_cqi(), {floor_level});
    auto p = make_plan(Policy::SingleGroup, users, config, table, table.codes(floor_level));
    return p;
}

SubgroupPlan group_based(const std::vector<UserRecord>& users, const GbParams& params, int max_codes,
                         const CqiTable& table)
{
    require_users(users);
    if (params.num_subgroups < 1) throw ConfigError("GB subgroup count must be at least 1");

    const auto counts = users_per_level(users, table.n_cqi());
    const int floor_level = lowest_occupied(counts);

    std::vector<int> ranked;
    for (int k = floor_level + 1; k <= table.n_cqi(); ++k) {
        if (counts[static_cast<std::size_t>(k - 1)] > 0) ranked.push_back(k);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        const int ca = counts[static_cast<std::size_t>(a - 1)];
        const int cb = counts[static_cast<std::size_t>(b - 1)];
        return ca != cb ? ca > cb : a > b;
    });
    if (static_cast<int>(ranked.size()) > params.num_subgroups - 1) {
        ranked.resize(static_cast<std::size_t>(params.num_subgroups - 1));
    }

    int codes = table.codes(floor_level);
    for (int k : ranked) codes += table.codes(k);
    while (codes > max_codes && !ranked.empty()) {
        codes -= table.codes(ranked.back());
        ranked.pop_back();
    }

    SubgroupConfig config(table.n_cqi(), {floor_level});
    for (int k : ranked) config.set(k);
    return make_plan(Policy::GroupBased, users, config, table, max_codes);
}

SubgroupPlan egb_optimize(const std::vector<UserRecord>& users, int max_codes, const CqiTable& table)
{
    require_users(users);
    if (max_codes < 1) throw ConfigError("code budget must be at least 1");

    const int n = table.n_cqi();
    const auto counts = users_per_level(users, n);
    const int floor_level = lowest_occupied(counts);

    int total_codes = 0;
    for (const auto& e : table.entries()) total_codes += e.num_codes;
    const int budget = std::min(max_codes, total_codes);

    // Users with CQI in [j, t) are all served at b_j when j and t are consecutive
    // enabled levels, so their deficit is
    //   sum_{k in [j, t)} U_k b_k - b_j * sum_{k in [j, t)} U_k.
    std::vector<std::int64_t> weighted(static_cast<std::size_t>(n) + 2, 0);
    std::vector<std::int64_t> population(static_cast<std::size_t>(n) + 2, 0);
    for (int k = 1; k <= n; ++k) {
        const auto u = static_cast<std::int64_t>(counts[static_cast<std::size_t>(k - 1)]);
        weighted[static_cast<std::size_t>(k + 1)] = weighted[static_cast<std::size_t>(k)] + u * table.rate_bps(k);
        population[static_cast<std::size_t>(k + 1)] = population[static_cast<std::size_t>(k)] + u;
    }
    auto segment_cost = [&](int j, int t) {
        const auto sj = static_cast<std::size_t>(j);
        const auto st = static_cast<std::size_t>(t);
        return (weighted[st] - weighted[sj]) - table.rate_bps(j) * (population[st] - population[sj]);
    };

    struct Cell {
        std::int64_t cost = 0;
        int codes = 0;
        int next = 0;  // next enabled level, n + 1 when none
    };
    const auto width = static_cast<std::size_t>(budget) + 1;
    std::vector<Cell> best(static_cast<std::size_t>(n + 1) * width);
    auto at = [&](int level, int remaining) -> Cell& {
        return best[static_cast<std::size_t>(level) * width + static_cast<std::size_t>(remaining)];
    };

    // best(j, r): cheapest completion above enabled level j with r codes left.
    // Candidates are scanned from "no further level" downward and only replaced
    // on strict improvement, so ties keep the higher next level, which is the
    // lexicographically smaller flag vector.
    for (int j = n; j >= 1; --j) {
        for (int r = 0; r <= budget; ++r) {
            Cell cell{segment_cost(j, n + 1), 0, n + 1};
            for (int t = n; t > j; --t) {
                const int c = table.codes(t);
                if (c > r) continue;
                const Cell& rest = at(t, r - c);
                const std::int64_t cost = segment_cost(j, t) + rest.cost;
                const int used = c + rest.codes;
                if (cost < cell.cost || (cost == cell.cost && used < cell.codes)) cell = {cost, used, t};
            }
            at(j, r) = cell;
        }
    }

    int first = 0;
    std::int64_t first_cost = std::numeric_limits<std::int64_t>::max();
    int first_codes = std::numeric_limits<int>::max();
    for (int e = floor_level; e >= 1; --e) {
        const int c = table.codes(e);
        if (c > budget) continue;
        const Cell& rest = at(e, budget - c);
        const int used = c + rest.codes;
        if (rest.cost < first_cost || (rest.cost == first_cost && used < first_codes)) {
            first = e;
            first_cost = rest.cost;
            first_codes = used;
        }
    }

    SubgroupConfig config(n);
    // No affordable level at or below the lowest occupied CQI: every feasible
    // configuration leaves someone in outage, and the empty one uses fewest codes.
    if (first != 0) {
        int level = first;
        int remaining = budget;
        while (level <= n) {
            config.set(level);
            remaining -= table.codes(level);
            level = at(level, remaining).next;
        }
    }
    return make_plan(Policy::EnhancedGroupBased, users, config, table, max_codes);
}

SubgroupPlan brute_force_optimize(const std::vector<UserRecord>& users, int max_codes, const CqiTable& table,
                                  int level_limit)
{
    require_users(users);
    if (max_codes < 1) throw ConfigError("code budget must be at least 1");
    const int n = table.n_cqi();
    if (n > level_limit || n > 62) {
        throw std::length_error("exhaustive search refused for " + std::to_string(n) + " CQI levels (limit " +
                                std::to_string(level_limit) + ")");
    }

    // Users sharing a CQI form one subgroup and share one UDI, so the group
    // objective is sum_k U_k * w_k over levels.
    const auto counts = users_per_level(users, n);

    struct Candidate {
        bool outage = true;
        std::int64_t deficit = 0;
        int codes = 0;
        SubgroupConfig config;
    };
    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.outage != b.outage) return !a.outage;
        if (!a.outage && a.deficit != b.deficit) return a.deficit < b.deficit;
        if (a.codes != b.codes) return a.codes < b.codes;
        return a.config < b.config;
    };

    std::optional<Candidate> best;
    const std::uint64_t space = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < space; ++mask) {
        Candidate cand;
        cand.config = SubgroupConfig::from_mask(n, mask);
        cand.codes = codes_used(cand.config, table);
        if (cand.codes > max_codes) continue;

        cand.outage = false;
        for (int k = 1; k <= n; ++k) {
            const int u = counts[static_cast<std::size_t>(k - 1)];
            if (u == 0) continue;
            const double c = assigned_rate(cand.config, k, table);
            if (udi(table.rate_kbps(k), c).is_infinite()) {
                cand.outage = true;
                break;
            }
            cand.deficit += u * (table.rate_bps(k) - std::llround(c * 1000.0));
        }
        if (!best || better(cand, *best)) best = std::move(cand);
    }
    return make_plan(Policy::EnhancedGroupBased, users, best->config, table, max_codes);
}

SubgroupPlan plan(Policy policy, const std::vector<UserRecord>& users, int max_codes, const GbParams& gb,
                  const CqiTable& table)
{
    switch (policy) {
    case Policy::SingleGroup: return single_group(users, table);
    case Policy::GroupBased: return group_based(users, gb, max_codes, table);
    case Policy::EnhancedGroupBased: return egb_optimize(users, max_codes, table);
    }
    throw ConfigError("unknown policy");
}

}  // namespace hsmcast
