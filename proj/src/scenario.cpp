#include "hsmcast/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hsmcast/errors.hpp"

namespace hsmcast {

void ScenarioConfig::validate() const
{
    if (!(cell_radius_m > 0.0)) throw ConfigError("cell_radius_m must be positive");
    if (num_neighbors < 0) throw ConfigError("num_neighbors must be non-negative");
    if (num_ues < 1) throw ConfigError("num_ues must be at least 1");
    if (!(radio.bs_tx_power_w > 0.0) || !(radio.other_bs_tx_power_w > 0.0) || !(radio.hsdsch_power_w > 0.0) ||
        !(common_channel_power_w > 0.0)) {
        throw ConfigError("all transmit powers must be positive");
    }
    if (radio.hsdsch_power_w + common_channel_power_w > radio.bs_tx_power_w) {
        throw ConfigError("HS-DSCH plus common channel power exceeds the BS transmit power");
    }
    if (!(radio.orthogonality >= 0.0 && radio.orthogonality <= 1.0)) {
        throw ConfigError("orthogonality must lie in [0, 1]");
    }
    if (!std::isfinite(radio.thermal_noise_dbm)) throw ConfigError("thermal_noise_dbm must be finite");
    if (max_codes < 1 || max_codes > kMaxCodes) throw ConfigError("max_codes must lie in [1, 15]");
    if (gb_subgroups < 1) throw ConfigError("gb_subgroups must be at least 1");
    if (sinr_map_path.empty() && cqi_offsets.count(bler_target) == 0) {
        throw ConfigError("bler_target must be one of 5, 10, 15, 20");
    }
    if (num_ttis < 1) throw ConfigError("num_ttis must be at least 1");
    if (feedback_period < 1 || rrm_period < 1) throw ConfigError("feedback and RRM periods must be positive");
    if (rrm_period % feedback_period != 0) throw ConfigError("feedback_period must divide rrm_period");
    if (drops < 1) throw ConfigError("drops must be at least 1");
    if (policies.empty()) throw ConfigError("no policy selected");
    propagation.validate();
    if (propagation.min_distance_m >= cell_radius_m) throw ConfigError("min_distance_m must be below the cell radius");
}

std::uint64_t drop_seed(std::uint64_t master_seed, int index) noexcept
{
    std::uint64_t z = master_seed + static_cast<std::uint64_t>(index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<Ue> place_users(int n, double radius_m, std::mt19937_64& rng, double min_distance_m)
{
    if (n < 1) throw std::invalid_argument("at least one UE required");
    if (!(radius_m > 0.0)) throw std::invalid_argument("radius must be positive");

    std::uniform_real_distribution<double> ux(-radius_m, radius_m);
    std::uniform_real_distribution<double> uy(-radius_m * std::sqrt(3.0) / 2.0, radius_m * std::sqrt(3.0) / 2.0);
    std::vector<Ue> ues;
    ues.reserve(static_cast<std::size_t>(n));
    while (static_cast<int>(ues.size()) < n) {
        const Point p{ux(rng), uy(rng)};
        if (!inside_hexagon(p, radius_m) || std::hypot(p.x, p.y) < min_distance_m) continue;
        Ue ue;
        ue.id = static_cast<std::uint32_t>(ues.size());
        ue.position = p;
        ues.push_back(std::move(ue));
    }
    return ues;
}

// --- metrics -----------------------------------------------------------------

namespace {

Dissatisfaction mean_of(const std::vector<CycleRecord>& cycles, Dissatisfaction CycleRecord::*field)
{
    if (cycles.empty()) return Dissatisfaction::finite(0.0);
    double sum = 0.0;
    for (const auto& c : cycles) {
        const auto v = c.*field;
        if (v.is_infinite()) return Dissatisfaction::infinity();
        sum += v.value();
    }
    return Dissatisfaction::finite(sum / static_cast<double>(cycles.size()));
}

}  // namespace

Dissatisfaction PolicyRun::mean_gdi() const { return mean_of(cycles, &CycleRecord::gdi); }

Dissatisfaction PolicyRun::mean_normalized_gdi() const { return mean_of(cycles, &CycleRecord::normalized_gdi); }

double PolicyRun::mean_codes() const
{
    if (cycles.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& c : cycles) sum += c.codes_used;
    return sum / static_cast<double>(cycles.size());
}

std::vector<double> RunMetrics::cqi_histogram_percent() const
{
    const double total = static_cast<double>(std::accumulate(cqi_reports.begin(), cqi_reports.end(), 0LL));
    std::vector<double> out(cqi_reports.size(), 0.0);
    if (total == 0.0) return out;
    for (std::size_t k = 0; k < cqi_reports.size(); ++k) out[k] = 100.0 * static_cast<double>(cqi_reports[k]) / total;
    return out;
}

int RunMetrics::min_reported_cqi() const
{
    for (std::size_t k = 0; k < cqi_reports.size(); ++k) {
        if (cqi_reports[k] > 0) return static_cast<int>(k) + 1;
    }
    return 0;
}

int RunMetrics::max_reported_cqi() const
{
    for (std::size_t k = cqi_reports.size(); k > 0; --k) {
        if (cqi_reports[k - 1] > 0) return static_cast<int>(k);
    }
    return 0;
}

const PolicyRun& RunMetrics::run(Policy p) const
{
    for (const auto& r : policies) {
        if (r.policy == p) return r;
    }
    throw std::out_of_range("policy '" + std::string(to_string(p)) + "' was not simulated");
}

Aggregate aggregate(const std::vector<double>& values)
{
    Aggregate a;
    if (values.empty()) return a;
    const double n = static_cast<double>(values.size());
    a.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / (n - 1.0));
    }
    return a;
}

Aggregate aggregate(const std::vector<Dissatisfaction>& values)
{
    std::vector<double> finite;
    finite.reserve(values.size());
    for (const auto& v : values) {
        if (v.is_infinite()) {
            Aggregate a;
            a.infinite = true;
            a.mean = std::numeric_limits<double>::infinity();
            a.stddev = std::numeric_limits<double>::quiet_NaN();
            return a;
        }
        finite.push_back(v.value());
    }
    return aggregate(finite);
}

const PolicyAggregate& CampaignResult::aggregate_for(Policy p) const
{
    for (const auto& a : policies) {
        if (a.policy == p) return a;
    }
    throw std::out_of_range("policy '" + std::string(to_string(p)) + "' was not simulated");
}

// --- simulation --------------------------------------------------------------

namespace {

SinrToCqiMap build_map(const ScenarioConfig& c)
{
    if (!c.sinr_map_path.empty()) return SinrToCqiMap::load(c.sinr_map_path);
    return SinrToCqiMap::affine(c.cqi_db_per_level, c.cqi_intercept, c.cqi_offsets);
}

CqiTable build_table(const ScenarioConfig& c)
{
    if (c.cqi_table_path.empty()) return bundled_table();
    return load_table(std::filesystem::path(c.cqi_table_path));
}

const ScenarioConfig& validated(const ScenarioConfig& c)
{
    c.validate();
    return c;
}

}  // namespace

Scenario::Scenario(ScenarioConfig config)
    : config_(validated(config)),
      table_(build_table(config_)),
      link_(CellLayout::hexagonal(config_.cell_radius_m, config_.num_neighbors), config_.radio,
            config_.propagation, build_map(config_), config_.bler_target, table_.n_cqi())
{
}

RunMetrics Scenario::run_drop(std::uint64_t seed) const
{
    const auto& c = config_;
    const int n_cqi = table_.n_cqi();
    std::mt19937_64 rng(seed);

    int num_ues = c.num_ues;
    if (c.poisson_ues) {
        std::poisson_distribution<int> poisson(static_cast<double>(c.num_ues));
        num_ues = std::max(1, poisson(rng));
    }

    auto ues = place_users(num_ues, c.cell_radius_m, rng, c.propagation.min_distance_m);
    for (auto& ue : ues) ue.link = link_.attach(ue.position, rng);

    RunMetrics m;
    m.seed = seed;
    m.num_ues = num_ues;
    m.num_ttis = c.num_ttis;
    m.cqi_reports.assign(static_cast<std::size_t>(n_cqi), 0);
    for (Policy p : c.policies) {
        PolicyRun run;
        run.policy = p;
        run.level_activations.assign(static_cast<std::size_t>(n_cqi), 0);
        run.level_users.assign(static_cast<std::size_t>(n_cqi), 0);
        m.policies.push_back(std::move(run));
    }

    const GbParams gb{c.gb_subgroups};
    std::vector<UserRecord> snapshot(ues.size());
    int cycle = 0;

    for (int tti = 0; tti < c.num_ttis; ++tti) {
        if (tti % c.feedback_period == 0) {
            for (auto& ue : ues) {
                ue.current_cqi = link_.sample(ue.link, rng).cqi;
                ue.cqi_history.push_back(ue.current_cqi);
                ++m.cqi_reports[static_cast<std::size_t>(ue.current_cqi - 1)];
            }
        }
        if (tti % c.rrm_period != 0) continue;

        // Phase 1: collect the latest CQI of every multicast UE.
        for (std::size_t i = 0; i < ues.size(); ++i) {
            snapshot[i] = {ues[i].id, ues[i].current_cqi, table_.rate_kbps(ues[i].current_cqi), std::nullopt};
        }
        m.cycle_snapshots.push_back(users_per_level(snapshot, n_cqi));

        // Phase 2 and 3: plan subgroups under each policy and book the codes.
        for (auto& run : m.policies) {
            const auto p = plan(run.policy, snapshot, c.max_codes, gb, table_);
            CycleRecord rec;
            rec.cycle = cycle;
            rec.tti = tti;
            rec.gdi = p.report.gdi;
            rec.normalized_gdi = normalized_gdi(p.report, snapshot, c.normalizer);
            rec.codes_used = p.report.codes_used;
            rec.within_budget = p.report.codes_used <= c.max_codes;
            rec.any_outage = std::any_of(p.report.per_user_udi.begin(), p.report.per_user_udi.end(),
                                         [](const auto& e) { return e.second.is_infinite(); });
            rec.config = p.config;
            for (const auto& lvl : p.per_level) {
                ++run.level_activations[static_cast<std::size_t>(lvl.level - 1)];
                run.level_users[static_cast<std::size_t>(lvl.level - 1)] += lvl.users;
            }
            run.cycles.push_back(std::move(rec));
        }
        ++cycle;
    }
    m.elapsed_ms = kTtiMs * c.num_ttis;
    return m;
}

RunMetrics run_drop(const ScenarioConfig& config, std::uint64_t seed)
{
    return Scenario(config).run_drop(seed);
}

CampaignResult run_campaign(const ScenarioConfig& config, int threads)
{
    const Scenario scenario(config);
    const auto& c = scenario.config();

    CampaignResult result;
    result.config = c;
    result.table = scenario.table();
    for (int i = 0; i < c.drops; ++i) result.seeds.push_back(drop_seed(c.seed, i));
    result.drops.resize(static_cast<std::size_t>(c.drops));

    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, c.drops);
    for (int start = 0; start < c.drops; start += threads) {
        std::vector<std::future<RunMetrics>> batch;
        const int end = std::min(c.drops, start + threads);
        for (int i = start; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&scenario, seed = result.seeds[static_cast<std::size_t>(i)]] {
                return scenario.run_drop(seed);
            }));
        }
        for (int i = start; i < end; ++i) result.drops[static_cast<std::size_t>(i)] = batch[static_cast<std::size_t>(i - start)].get();
    }

    const auto n_cqi = static_cast<std::size_t>(result.table.n_cqi());
    result.cqi_histogram_percent.assign(n_cqi, 0.0);
    for (const auto& d : result.drops) {
        const auto h = d.cqi_histogram_percent();
        for (std::size_t k = 0; k < n_cqi; ++k) result.cqi_histogram_percent[k] += h[k];
    }
    for (auto& v : result.cqi_histogram_percent) v /= static_cast<double>(c.drops);

    for (Policy p : c.policies) {
        PolicyAggregate agg;
        agg.policy = p;
        std::vector<Dissatisfaction> gdis, norms;
        std::vector<double> codes;
        std::vector<long long> users(n_cqi, 0), activations(n_cqi, 0);
        long long cycles = 0;
        for (const auto& d : result.drops) {
            const auto& run = d.run(p);
            gdis.push_back(run.mean_gdi());
            norms.push_back(run.mean_normalized_gdi());
            codes.push_back(run.mean_codes());
            cycles += static_cast<long long>(run.cycles.size());
            for (std::size_t k = 0; k < n_cqi; ++k) {
                users[k] += run.level_users[k];
                activations[k] += run.level_activations[k];
            }
        }
        agg.gdi_kbps = aggregate(gdis);
        agg.normalized_gdi = aggregate(norms);
        agg.codes_used = aggregate(codes);
        agg.mean_users_per_level.assign(n_cqi, 0.0);
        agg.activation_share.assign(n_cqi, 0.0);
        for (std::size_t k = 0; k < n_cqi && cycles > 0; ++k) {
            agg.mean_users_per_level[k] = static_cast<double>(users[k]) / static_cast<double>(cycles);
            agg.activation_share[k] = static_cast<double>(activations[k]) / static_cast<double>(cycles);
        }
        result.policies.push_back(std::move(agg));
    }
    return result;
}

}  // namespace hsmcast
