#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hsmcast/cqi_table.hpp"
#include "hsmcast/link_model.hpp"
#include "hsmcast/policies.hpp"

namespace hsmcast {

inline constexpr double kTtiMs = 2.0;

/// Scenario parameters. Defaults describe the baseline HSDPA multicast setup:
/// one Node B (550 m hexagonal cell) with 18 interfering sites, 100 multicast UEs,
/// 20 W / 5 W / 1 W / 12 W power split, 11.5 dBi antennas, p = 0.5, -100 dBm
/// noise, 15 codes, Category 10 terminals.
struct ScenarioConfig {
    double cell_radius_m = 550.0;
    int num_neighbors = 18;
    int num_ues = 100;
    bool poisson_ues = false;  // draw the UE count per drop from Poisson(num_ues)

    RadioParams radio;
    double common_channel_power_w = 1.0;

    int bler_target = 10;  // percent
    int max_codes = 15;
    int gb_subgroups = 2;
    GdiNormalizer normalizer = GdiNormalizer::MeanSupportedRate;

    std::string cqi_table_path;  // empty: bundled Category 10 table
    std::string sinr_map_path;   // empty: affine map below
    double cqi_db_per_level = 1.02;
    double cqi_intercept = 16.62;
    std::map<int, double> cqi_offsets = SinrToCqiMap::default_offsets();

    PropagationConfig propagation;

    int num_ttis = 10000;
    int feedback_period = 20;  // TTIs between CQI reports
    int rrm_period = 20;       // TTIs between re-planning (20 TTIs = 40 ms)

    std::uint64_t seed = 1;
    int drops = 10;
    std::vector<Policy> policies{std::begin(kAllPolicies), std::end(kAllPolicies)};

    /// Throws ConfigError on the first violated constraint.
    void validate() const;
};

/// Seed of drop `index` under a master seed (splitmix64 of master + (index+1) * golden ratio).
std::uint64_t drop_seed(std::uint64_t master_seed, int index) noexcept;

struct Ue {
    std::uint32_t id = 0;
    Point position;
    UeLink link;
    int current_cqi = 1;
    std::vector<int> cqi_history;
};

/// Uniform-by-area positions inside the hexagonal serving cell, rejecting points
/// closer than `min_distance_m` to the site.
std::vector<Ue> place_users(int n, double radius_m, std::mt19937_64& rng, double min_distance_m = 0.0);

struct CycleRecord {
    int cycle = 0;
    int tti = 0;
    Dissatisfaction gdi;
    Dissatisfaction normalized_gdi;
    int codes_used = 0;
    bool within_budget = true;
    bool any_outage = false;
    SubgroupConfig config;
};

struct PolicyRun {
    Policy policy = Policy::SingleGroup;
    std::vector<CycleRecord> cycles;
    std::vector<long long> level_activations;  // cycles in which level k was enabled (index k-1)
    std::vector<long long> level_users;        // users served at level k, summed over cycles

    Dissatisfaction mean_gdi() const;
    Dissatisfaction mean_normalized_gdi() const;
    double mean_codes() const;
};

struct RunMetrics {
    std::uint64_t seed = 0;
    int num_ues = 0;
    int num_ttis = 0;
    double elapsed_ms = 0.0;
    std::vector<long long> cqi_reports;              // CQI reports per level over the drop
    std::vector<std::vector<int>> cycle_snapshots;   // per RRM cycle: users per level used for planning
    std::vector<PolicyRun> policies;

    std::vector<double> cqi_histogram_percent() const;
    /// Lowest / highest CQI level reported during the drop.
    int min_reported_cqi() const;
    int max_reported_cqi() const;
    const PolicyRun& run(Policy p) const;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for one value
    bool infinite = false;
};

Aggregate aggregate(const std::vector<Dissatisfaction>& values);
Aggregate aggregate(const std::vector<double>& values);

struct PolicyAggregate {
    Policy policy = Policy::SingleGroup;
    Aggregate gdi_kbps;
    Aggregate normalized_gdi;
    Aggregate codes_used;
    std::vector<double> mean_users_per_level;   // over all cycles of all drops
    std::vector<double> activation_share;       // fraction of cycles with level k enabled
};

struct CampaignResult {
    ScenarioConfig config;
    CqiTable table;
    std::vector<std::uint64_t> seeds;
    std::vector<RunMetrics> drops;
    std::vector<double> cqi_histogram_percent;  // mean of per-drop histograms
    std::vector<PolicyAggregate> policies;

    const PolicyAggregate& aggregate_for(Policy p) const;
};

/// Resolved simulation inputs: the loaded CQI table and link model.
class Scenario {
public:
    explicit Scenario(ScenarioConfig config);

    const ScenarioConfig& config() const noexcept { return config_; }
    const CqiTable& table() const noexcept { return table_; }
    const LinkModel& link_model() const noexcept { return link_; }

    /// One Monte Carlo drop. UEs are placed once; the TTI clock then drives
    /// periodic CQI feedback and per-policy RRM cycles.
    RunMetrics run_drop(std::uint64_t seed) const;

private:
    ScenarioConfig config_;
    CqiTable table_;
    LinkModel link_;
};

RunMetrics run_drop(const ScenarioConfig& config, std::uint64_t seed);

/// Independent drops seeded from config.seed, aggregated. `threads` <= 0 picks
/// the hardware concurrency. Results do not depend on the thread count.
CampaignResult run_campaign(const ScenarioConfig& config, int threads = 0);

}  // namespace hsmcast
