#include "hsmcast/link_model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "hsmcast/errors.hpp"
#include "text_util.hpp"

namespace hsmcast {

std::string_view to_string(FadingMode m) noexcept
{
    return m == FadingMode::Off ? "off" : "peda";
}

FadingMode parse_fading_mode(std::string_view s)
{
    if (s == "off") return FadingMode::Off;
    if (s == "peda") return FadingMode::PedestrianA;
    throw ConfigError("fading must be 'off' or 'peda', got '" + std::string(s) + "'");
}

void PropagationConfig::validate() const
{
    if (!(carrier_frequency_mhz > 0.0)) throw ConfigError("carrier frequency must be positive");
    if (!(bs_height_m > 0.0) || !(ue_height_m > 0.0)) throw ConfigError("antenna heights must be positive");
    if (!(shadowing_sigma_db >= 0.0)) throw ConfigError("shadowing sigma must be non-negative");
    if (!(ue_speed_kmh >= 0.0)) throw ConfigError("UE speed must be non-negative");
    if (!(min_distance_m > 0.0)) throw ConfigError("minimum distance must be positive");
}

double path_loss_db(double distance_m, const PropagationConfig& cfg)
{
    if (!(distance_m > 0.0) || distance_m < cfg.min_distance_m) {
        throw std::out_of_range("distance " + std::to_string(distance_m) + " m below path-loss model validity");
    }
    const double log_f = std::log10(cfg.carrier_frequency_mhz);
    const double log_hb = std::log10(cfg.bs_height_m);
    const double mobile_correction = (1.1 * log_f - 0.7) * cfg.ue_height_m - (1.56 * log_f - 0.8);
    return 46.3 + 33.9 * log_f - 13.82 * log_hb - mobile_correction +
           (44.9 - 6.55 * log_hb) * std::log10(distance_m / 1000.0) + cfg.metro_correction_db;
}

double geometry_factor(double p_own_w, double p_other_w, double p_noise_w)
{
    const double denom = p_other_w + p_noise_w;
    if (!(denom > 0.0)) throw std::domain_error("geometry factor: other-cell plus noise power is zero");
    return p_own_w / denom;
}

double sinr(const LinkBudget& budget, double geometry)
{
    if (!(budget.p_own_w > 0.0)) throw std::domain_error("sinr: own-cell power must be positive");
    const double inv_g = 1.0 / geometry;  // +inf for G = 0, 0 for G = +inf
    const double denom = budget.orthogonality + inv_g;
    if (!(denom > 0.0)) throw std::domain_error("sinr: orthogonality and 1/G are both zero");
    return LinkBudget::kSpreadingFactor * (budget.p_hsdsch_w / budget.p_own_w) / denom;
}

// --- SINR -> CQI -------------------------------------------------------------

std::map<int, double> SinrToCqiMap::default_offsets()
{
    return {{5, -0.5}, {10, 0.0}, {15, 0.3}, {20, 0.5}};
}

SinrToCqiMap SinrToCqiMap::affine(double db_per_cqi, double intercept, std::map<int, double> offsets)
{
    if (!(db_per_cqi > 0.0)) throw ConfigError("SINR->CQI slope must be positive");
    if (offsets.empty()) throw ConfigError("SINR->CQI map needs at least one BLER target");
    SinrToCqiMap m;
    m.db_per_cqi_ = db_per_cqi;
    m.intercept_ = intercept;
    m.offsets_ = std::move(offsets);
    m.check_cross_target_order();
    return m;
}

SinrToCqiMap SinrToCqiMap::from_breakpoints(std::map<int, std::vector<Breakpoint>> table)
{
    if (table.empty()) throw ConfigError("SINR->CQI breakpoint table is empty");
    for (auto& [target, points] : table) {
        if (points.empty()) throw ConfigError("no breakpoints for BLER target " + std::to_string(target));
        std::stable_sort(points.begin(), points.end(),
                         [](const Breakpoint& a, const Breakpoint& b) { return a.sinr_db < b.sinr_db; });
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (points[i].cqi < points[i - 1].cqi) {
                throw ConfigError("CQI decreases with SINR for BLER target " + std::to_string(target));
            }
        }
    }
    SinrToCqiMap m;
    m.breakpoints_ = std::move(table);
    m.check_cross_target_order();
    return m;
}

void SinrToCqiMap::check_cross_target_order() const
{
    if (is_affine()) {
        double prev = -std::numeric_limits<double>::infinity();
        for (const auto& [target, offset] : offsets_) {
            if (offset < prev) throw ConfigError("SINR->CQI offsets must not decrease with BLER target");
            prev = offset;
        }
        return;
    }
    std::set<double> probes{-std::numeric_limits<double>::infinity()};
    for (const auto& [target, points] : breakpoints_) {
        for (const auto& p : points) probes.insert(p.sinr_db);
    }
    const auto targets = this->targets();
    for (std::size_t i = 1; i < targets.size(); ++i) {
        for (double s : probes) {
            if (cqi(s, targets[i], 30) < cqi(s, targets[i - 1], 30)) {
                throw ConfigError("a higher BLER target maps to a lower CQI at " + std::to_string(s) + " dB");
            }
        }
    }
}

SinrToCqiMap SinrToCqiMap::parse(std::string_view csv, const std::string& source)
{
    std::map<int, std::vector<Breakpoint>> table;
    bool header_seen = false;
    const auto all = detail::lines(csv);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto line = detail::trim(all[i]);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "bler_target,sinr_db,cqi") throw ParseError(source, i + 1, "unexpected header");
            header_seen = true;
            continue;
        }
        const auto f = detail::split(line, ',');
        if (f.size() != 3) throw ParseError(source, i + 1, "expected 3 fields");
        const auto target = detail::parse_number<int>(f[0]);
        const auto s = detail::parse_number<double>(f[1]);
        const auto c = detail::parse_number<int>(f[2]);
        if (!target || !s || !c) throw ParseError(source, i + 1, "malformed breakpoint");
        table[*target].push_back({*s, *c});
    }
    if (table.empty()) throw ParseError(source, all.size() + 1, "no breakpoints");
    return from_breakpoints(std::move(table));
}

SinrToCqiMap SinrToCqiMap::load(const std::filesystem::path& path)
{
    return parse(detail::read_file(path.string()), path.string());
}

bool SinrToCqiMap::has_target(int bler_percent) const noexcept
{
    return is_affine() ? offsets_.count(bler_percent) > 0 : breakpoints_.count(bler_percent) > 0;
}

std::vector<int> SinrToCqiMap::targets() const
{
    std::vector<int> out;
    if (is_affine()) {
        for (const auto& kv : offsets_) out.push_back(kv.first);
    } else {
        for (const auto& kv : breakpoints_) out.push_back(kv.first);
    }
    return out;
}

int SinrToCqiMap::cqi(double sinr_db, int bler_percent, int n_cqi) const
{
    if (std::isnan(sinr_db)) throw std::domain_error("SINR is NaN");
    if (!has_target(bler_percent)) {
        throw ConfigError("no SINR->CQI mapping for BLER target " + std::to_string(bler_percent) + "%");
    }
    double level = 1.0;
    if (is_affine()) {
        level = std::floor(sinr_db / db_per_cqi_ + intercept_ + offsets_.at(bler_percent) + 0.5);
    } else {
        for (const auto& p : breakpoints_.at(bler_percent)) {
            if (p.sinr_db > sinr_db) break;
            level = p.cqi;
        }
    }
    return static_cast<int>(std::clamp(level, 1.0, static_cast<double>(n_cqi)));
}

int sinr_to_cqi(double sinr_db, int bler_percent, const SinrToCqiMap& map, int n_cqi)
{
    return map.cqi(sinr_db, bler_percent, n_cqi);
}

// --- channel composition -----------------------------------------------------

double draw_pedestrian_a_fading_db(std::mt19937_64& rng)
{
    std::exponential_distribution<double> tap_power(1.0);
    double gain = 0.0;
    double total = 0.0;
    for (const auto& tap : kPedestrianA) {
        const double w = from_db(tap.power_db);
        gain += w * tap_power(rng);
        total += w;
    }
    return to_db(gain / total);
}

LinkModel::LinkModel(CellLayout layout, RadioParams radio, PropagationConfig propagation, SinrToCqiMap map,
                     int bler_percent, int n_cqi)
    : layout_(std::move(layout)),
      radio_(radio),
      propagation_(propagation),
      map_(std::move(map)),
      bler_percent_(bler_percent),
      n_cqi_(n_cqi)
{
    propagation_.validate();
    if (!map_.has_target(bler_percent_)) {
        throw ConfigError("no SINR->CQI mapping for BLER target " + std::to_string(bler_percent_) + "%");
    }
}

UeLink LinkModel::attach(Point position, std::mt19937_64& rng) const
{
    std::vector<double> shadowing(layout_.sites().size(), 0.0);
    if (propagation_.shadowing_sigma_db > 0.0) {
        std::normal_distribution<double> normal(0.0, propagation_.shadowing_sigma_db);
        for (auto& s : shadowing) s = normal(rng);
    }
    return attach(position, std::move(shadowing));
}

UeLink LinkModel::attach(Point position, std::vector<double> shadowing_db) const
{
    const auto& sites = layout_.sites();
    if (shadowing_db.size() != sites.size()) throw std::invalid_argument("one shadowing value per site required");

    UeLink ue;
    ue.position = position;
    ue.shadowing_db = std::move(shadowing_db);
    ue.mean_rx_power_w.reserve(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const double tx_dbm = watts_to_dbm(i == 0 ? radio_.bs_tx_power_w : radio_.other_bs_tx_power_w);
        const double rx_dbm = tx_dbm + radio_.antenna_gain_dbi -
                              path_loss_db(distance(position, sites[i]), propagation_) - ue.shadowing_db[i];
        ue.mean_rx_power_w.push_back(dbm_to_watts(rx_dbm));
    }
    return ue;
}

ChannelSample LinkModel::evaluate(const UeLink& ue, double fading_db) const
{
    ChannelSample out;
    out.fading_db = fading_db;

    const double own_gain = from_db(fading_db);
    const double own = ue.mean_rx_power_w.front() * own_gain;
    double other = 0.0;
    for (std::size_t i = 1; i < ue.mean_rx_power_w.size(); ++i) other += ue.mean_rx_power_w[i];

    out.budget.p_own_w = own;
    out.budget.p_hsdsch_w = own * radio_.hsdsch_power_w / radio_.bs_tx_power_w;
    out.budget.p_other_w = other;
    out.budget.p_noise_w = dbm_to_watts(radio_.thermal_noise_dbm);
    out.budget.orthogonality = radio_.orthogonality;

    out.geometry = geometry_factor(out.budget.p_own_w, out.budget.p_other_w, out.budget.p_noise_w);
    out.sinr_linear = sinr(out.budget, out.geometry);
    out.sinr_db = to_db(out.sinr_linear);
    out.cqi = map_.cqi(out.sinr_db, bler_percent_, n_cqi_);
    return out;
}

ChannelSample LinkModel::sample(const UeLink& ue, std::mt19937_64& rng) const
{
    const double fading_db =
        propagation_.fading == FadingMode::PedestrianA ? draw_pedestrian_a_fading_db(rng) : 0.0;
    return evaluate(ue, fading_db);
}

ChannelSample sample_channel(Point position, const LinkModel& model, std::mt19937_64& rng)
{
    if (!inside_hexagon(position, model.layout().radius())) {
        throw std::out_of_range("UE position outside the serving cell");
    }
    return model.sample(model.attach(position, rng), rng);
}

}  // namespace hsmcast
