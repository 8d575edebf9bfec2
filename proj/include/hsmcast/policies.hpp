#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "hsmcast/cqi_table.hpp"
#include "hsmcast/satisfaction.hpp"

namespace hsmcast {

enum class Policy { SingleGroup, GroupBased, EnhancedGroupBased };

inline constexpr Policy kAllPolicies[] = {Policy::SingleGroup, Policy::GroupBased, Policy::EnhancedGroupBased};

std::string_view to_string(Policy p) noexcept;  // "sg" | "gb" | "egb"
Policy parse_policy(std::string_view s);

struct LevelAllocation {
    int level = 0;
    double rate_kbps = 0.0;
    int codes = 0;
    int users = 0;  // users served at this level
};

/// A policy's decision for one multicast snapshot.
struct SubgroupPlan {
    Policy policy = Policy::SingleGroup;
    SubgroupConfig config;
    std::vector<LevelAllocation> per_level;                  // enabled levels, ascending
    std::vector<std::pair<std::uint32_t, int>> assignment;   // user id -> serving level (0 = none)
    DissatisfactionReport report;
    int code_budget = 0;                                     // M the plan was made under (0 for SG)

    bool within_budget() const noexcept { return report.codes_used <= code_budget; }
};

struct GbParams {
    int num_subgroups = 2;
};

/// Evaluates a given configuration into a complete plan.
SubgroupPlan make_plan(Policy policy, const std::vector<UserRecord>& users, const SubgroupConfig& config,
                       const CqiTable& table, int code_budget);

/// One transmission at the lowest occupied CQI.
SubgroupPlan single_group(const std::vector<UserRecord>& users, const CqiTable& table);

/// Lowest occupied CQI plus the n-1 most populated occupied levels, then drops the
/// least populated extra levels until the code budget holds. Population ties prefer
/// the higher level. The lowest occupied level is never dropped.
SubgroupPlan group_based(const std::vector<UserRecord>& users, const GbParams& params, int max_codes,
                         const CqiTable& table);

/// Exact minimum-GDI configuration under a code budget.
///
/// Among configurations with equal GDI the one using fewer codes wins; remaining
/// ties go to the lexicographically smallest flag vector (level 1 first).
/// Runs in O(n_cqi^2 * M).
SubgroupPlan egb_optimize(const std::vector<UserRecord>& users, int max_codes, const CqiTable& table);

inline constexpr int kDefaultBruteForceLevelLimit = 25;

/// Exhaustive search over all 2^n_cqi configurations with the same objective and
/// tie-breaks as egb_optimize. Refuses tables larger than `level_limit`.
SubgroupPlan brute_force_optimize(const std::vector<UserRecord>& users, int max_codes, const CqiTable& table,
                                  int level_limit = kDefaultBruteForceLevelLimit);

SubgroupPlan plan(Policy policy, const std::vector<UserRecord>& users, int max_codes, const GbParams& gb,
                  const CqiTable& table);

}  // namespace hsmcast
