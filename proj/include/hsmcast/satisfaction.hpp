#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsmcast/cqi_table.hpp"

namespace hsmcast {

/// Non-negative quantity extended with a saturating infinity. Used for user and
/// group dissatisfaction, where infinity marks outage (no rate) or a rate above
/// what the user can decode.
class Dissatisfaction {
public:
    constexpr Dissatisfaction() = default;
    static constexpr Dissatisfaction finite(double v) noexcept { return Dissatisfaction(v, false); }
    static constexpr Dissatisfaction infinity() noexcept { return Dissatisfaction(0.0, true); }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }
    /// Finite magnitude; throws std::domain_error when infinite.
    double value() const;
    /// Magnitude as a double, +inf when infinite (for printing and plotting).
    double as_double() const noexcept;

    friend constexpr Dissatisfaction operator+(Dissatisfaction a, Dissatisfaction b) noexcept
    {
        if (a.infinite_ || b.infinite_) return infinity();
        return finite(a.value_ + b.value_);
    }

    friend constexpr bool operator==(Dissatisfaction a, Dissatisfaction b) noexcept
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    friend constexpr std::partial_ordering operator<=>(Dissatisfaction a, Dissatisfaction b) noexcept
    {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

private:
    constexpr Dissatisfaction(double v, bool inf) noexcept : value_(v), infinite_(inf) {}

    double value_ = 0.0;
    bool infinite_ = false;
};

std::string to_string(Dissatisfaction d, int decimals);

/// Which multicast transmissions are enabled, one flag per CQI level.
///
/// Ordering compares the flag vectors lexicographically from level 1 upward,
/// with disabled < enabled.
class SubgroupConfig {
public:
    SubgroupConfig() = default;
    explicit SubgroupConfig(int n_cqi) : active_(static_cast<std::size_t>(n_cqi), false) {}
    SubgroupConfig(int n_cqi, std::initializer_list<int> enabled_levels);
    static SubgroupConfig from_levels(int n_cqi, const std::vector<int>& enabled_levels);
    /// Bit k-1 of `mask` enables level k.
    static SubgroupConfig from_mask(int n_cqi, std::uint64_t mask);

    int n_cqi() const noexcept { return static_cast<int>(active_.size()); }
    bool enabled(int level) const;
    void set(int level, bool on = true);
    std::vector<int> enabled_levels() const;
    bool empty() const noexcept;

    const std::vector<bool>& flags() const noexcept { return active_; }

    friend bool operator==(const SubgroupConfig&, const SubgroupConfig&) = default;
    friend bool operator<(const SubgroupConfig& a, const SubgroupConfig& b) { return a.active_ < b.active_; }

private:
    std::vector<bool> active_;
};

std::string to_string(const SubgroupConfig& config);

struct UserRecord {
    std::uint32_t user_id = 0;
    int cqi = 1;
    double b_kbps = 0.0;                 // maximum supported rate
    std::optional<double> c_kbps;        // assigned rate, set by planning
};

/// Builds records for users at the given CQI levels, ids 0..n-1.
std::vector<UserRecord> make_users(const std::vector<int>& cqis, const CqiTable& table);

enum class GdiNormalizer {
    MeanSupportedRate,  // (1/N) * sum b_i
    MaxSupportedRate,   // max_i b_i
};

struct DissatisfactionReport {
    std::vector<std::pair<std::uint32_t, Dissatisfaction>> per_user_udi;
    std::vector<double> assigned_kbps;        // c_i, same order as the input users
    Dissatisfaction gdi;                      // kbps
    std::int64_t total_deficit_bps = 0;       // sum over users of b_i - c_i; meaningful when gdi is finite
    int codes_used = 0;
    std::vector<int> users_per_level;         // index k-1 holds U_k
    std::size_t num_users = 0;
};

/// User dissatisfaction: b - c when 0 < c <= b, infinity otherwise.
Dissatisfaction udi(double b_kbps, double c_kbps) noexcept;

/// Highest enabled rate at or below level k, or 0 when no level <= k is enabled.
double assigned_rate(const SubgroupConfig& config, int k, const CqiTable& table);

/// Sum of channelization codes over the enabled levels.
int codes_used(const SubgroupConfig& config, const CqiTable& table);

/// Assigns every user its rate under `config` and averages their dissatisfaction.
/// Throws std::domain_error for an empty user list and std::invalid_argument when a
/// user's CQI or b is inconsistent with the table.
DissatisfactionReport gdi(const std::vector<UserRecord>& users, const SubgroupConfig& config, const CqiTable& table);

/// Same, writing the assigned rate back into each record.
DissatisfactionReport assign_and_evaluate(std::vector<UserRecord>& users, const SubgroupConfig& config,
                                          const CqiTable& table);

/// GDI divided by the mean (or max) supported rate; infinity passes through.
Dissatisfaction normalized_gdi(const DissatisfactionReport& report, const std::vector<UserRecord>& users,
                               GdiNormalizer normalizer = GdiNormalizer::MeanSupportedRate);

/// Users per CQI level (index k-1 holds the count at level k).
std::vector<int> users_per_level(const std::vector<UserRecord>& users, int n_cqi);

}  // namespace hsmcast
