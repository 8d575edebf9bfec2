#include "hsmcast/satisfaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hsmcast {

double Dissatisfaction::value() const
{
    if (infinite_) throw std::domain_error("dissatisfaction is infinite");
    return value_;
}

double Dissatisfaction::as_double() const noexcept
{
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string to_string(Dissatisfaction d, int decimals)
{
    if (d.is_infinite()) return "inf";
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(decimals);
    out << d.value();
    return out.str();
}

SubgroupConfig::SubgroupConfig(int n_cqi, std::initializer_list<int> enabled_levels) : SubgroupConfig(n_cqi)
{
    for (int k : enabled_levels) set(k);
}

SubgroupConfig SubgroupConfig::from_levels(int n_cqi, const std::vector<int>& enabled_levels)
{
    SubgroupConfig c(n_cqi);
    for (int k : enabled_levels) c.set(k);
    return c;
}

SubgroupConfig SubgroupConfig::from_mask(int n_cqi, std::uint64_t mask)
{
    SubgroupConfig c(n_cqi);
    for (int k = 1; k <= n_cqi; ++k) {
        if (mask & (std::uint64_t{1} << (k - 1))) c.set(k);
    }
    return c;
}

bool SubgroupConfig::enabled(int level) const
{
    if (level < 1 || level > n_cqi()) throw std::out_of_range("subgroup level out of range");
    return active_[static_cast<std::size_t>(level - 1)];
}

void SubgroupConfig::set(int level, bool on)
{
    if (level < 1 || level > n_cqi()) throw std::out_of_range("subgroup level out of range");
    active_[static_cast<std::size_t>(level - 1)] = on;
}

std::vector<int> SubgroupConfig::enabled_levels() const
{
    std::vector<int> out;
    for (int k = 1; k <= n_cqi(); ++k) {
        if (active_[static_cast<std::size_t>(k - 1)]) out.push_back(k);
    }
    return out;
}

bool SubgroupConfig::empty() const noexcept
{
    return std::none_of(active_.begin(), active_.end(), [](bool b) { return b; });
}

std::string to_string(const SubgroupConfig& config)
{
    std::string out = "{";
    for (int k : config.enabled_levels()) {
        if (out.size() > 1) out += ',';
        out += std::to_string(k);
    }
    return out + "}";
}

std::vector<UserRecord> make_users(const std::vector<int>& cqis, const CqiTable& table)
{
    std::vector<UserRecord> users;
    users.reserve(cqis.size());
    for (std::size_t i = 0; i < cqis.size(); ++i) {
        users.push_back({static_cast<std::uint32_t>(i), cqis[i], table.rate_kbps(cqis[i]), std::nullopt});
    }
    return users;
}

Dissatisfaction udi(double b_kbps, double c_kbps) noexcept
{
    if (c_kbps <= 0.0 || b_kbps < c_kbps) return Dissatisfaction::infinity();
    return Dissatisfaction::finite(b_kbps - c_kbps);
}

namespace {

/// Highest enabled level <= k, or 0.
int serving_level(const SubgroupConfig& config, int k)
{
    for (int j = k; j >= 1; --j) {
        if (config.enabled(j)) return j;
    }
    return 0;
}

}  // namespace

double assigned_rate(const SubgroupConfig& config, int k, const CqiTable& table)
{
    if (k < 1 || k > table.n_cqi()) throw std::out_of_range("CQI level out of range");
    if (config.n_cqi() != table.n_cqi()) throw std::invalid_argument("configuration length does not match table");
    const int j = serving_level(config, k);
    return j == 0 ? 0.0 : table.rate_kbps(j);
}

int codes_used(const SubgroupConfig& config, const CqiTable& table)
{
    if (config.n_cqi() != table.n_cqi()) throw std::invalid_argument("configuration length does not match table");
    int total = 0;
    for (int k : config.enabled_levels()) total += table.codes(k);
    return total;
}

std::vector<int> users_per_level(const std::vector<UserRecord>& users, int n_cqi)
{
    std::vector<int> counts(static_cast<std::size_t>(n_cqi), 0);
    for (const auto& u : users) {
        if (u.cqi < 1 || u.cqi > n_cqi) throw std::invalid_argument("user CQI out of range");
        ++counts[static_cast<std::size_t>(u.cqi - 1)];
    }
    return counts;
}

DissatisfactionReport gdi(const std::vector<UserRecord>& users, const SubgroupConfig& config, const CqiTable& table)
{
    if (users.empty()) throw std::domain_error("GDI of an empty multicast group");
    if (config.n_cqi() != table.n_cqi()) throw std::invalid_argument("configuration length does not match table");

    DissatisfactionReport report;
    report.num_users = users.size();
    report.users_per_level = users_per_level(users, table.n_cqi());
    report.codes_used = codes_used(config, table);
    report.per_user_udi.reserve(users.size());
    report.assigned_kbps.reserve(users.size());

    bool outage = false;
    std::int64_t deficit = 0;
    for (const auto& u : users) {
        const auto& row = table.lookup(u.cqi);
        if (std::abs(u.b_kbps - row.data_rate_kbps) > 1e-9) {
            throw std::invalid_argument("user " + std::to_string(u.user_id) + " supported rate does not match CQI " +
                                        std::to_string(u.cqi));
        }
        const int j = serving_level(config, u.cqi);
        const double c = j == 0 ? 0.0 : table.rate_kbps(j);
        const auto w = udi(u.b_kbps, c);
        report.per_user_udi.emplace_back(u.user_id, w);
        report.assigned_kbps.push_back(c);
        if (w.is_infinite()) {
            outage = true;
        } else {
            deficit += row.rate_bps() - table.rate_bps(j);
        }
    }

    report.total_deficit_bps = deficit;
    report.gdi = outage ? Dissatisfaction::infinity()
                        : Dissatisfaction::finite(static_cast<double>(deficit) / 1000.0 /
                                                  static_cast<double>(users.size()));
    return report;
}

DissatisfactionReport assign_and_evaluate(std::vector<UserRecord>& users, const SubgroupConfig& config,
                                          const CqiTable& table)
{
    auto report = gdi(users, config, table);
    for (std::size_t i = 0; i < users.size(); ++i) users[i].c_kbps = report.assigned_kbps[i];
    return report;
}

Dissatisfaction normalized_gdi(const DissatisfactionReport& report, const std::vector<UserRecord>& users,
                               GdiNormalizer normalizer)
{
    if (report.gdi.is_infinite()) return Dissatisfaction::infinity();
    if (users.empty()) throw std::domain_error("normalizing GDI of an empty group");
    double scale = 0.0;
    if (normalizer == GdiNormalizer::MeanSupportedRate) {
        for (const auto& u : users) scale += u.b_kbps;
        scale /= static_cast<double>(users.size());
    } else {
        for (const auto& u : users) scale = std::max(scale, u.b_kbps);
    }
    if (!(scale > 0.0)) throw std::domain_error("normalizer is zero");
    return Dissatisfaction::finite(report.gdi.value() / scale);
}

}  // namespace hsmcast
