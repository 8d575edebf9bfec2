#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hsmcast/geometry.hpp"

namespace hsmcast {

enum class FadingMode { Off, PedestrianA };

std::string_view to_string(FadingMode m) noexcept;
FadingMode parse_fading_mode(std::string_view s);  // "off" | "peda"

/// Propagation and fading settings.
///
/// Path loss follows the COST-231 extension of Hata's urban model, which is
/// fitted for 1500-2000 MHz carriers.
struct PropagationConfig {
    double carrier_frequency_mhz = 2000.0;
    double bs_height_m = 30.0;
    double ue_height_m = 1.5;
    double metro_correction_db = 0.0;  // C: 0 dB medium city, 3 dB metropolitan centre
    double shadowing_sigma_db = 8.0;
    FadingMode fading = FadingMode::PedestrianA;
    double ue_speed_kmh = 3.0;
    double min_distance_m = 10.0;  // closer than this the model is not evaluated

    void validate() const;  // throws ConfigError
};

/// Powers entering the downlink SINR expression. Own-cell powers are in the
/// same (received) reference so that the HS-DSCH share is p_hsdsch / p_own.
struct LinkBudget {
    static constexpr double kSpreadingFactor = 16.0;

    double p_hsdsch_w = 0.0;
    double p_own_w = 0.0;
    double p_other_w = 0.0;
    double p_noise_w = 0.0;
    double orthogonality = 0.5;
};

/// Median path loss in dB. Throws std::out_of_range for distances below
/// `cfg.min_distance_m` (or non-positive).
double path_loss_db(double distance_m, const PropagationConfig& cfg);

/// Own-cell received power over other-cell interference plus noise.
/// Throws std::domain_error when p_other + p_noise is zero.
double geometry_factor(double p_own_w, double p_other_w, double p_noise_w);

/// SF16 * (P_hsdsch / P_own) / (p + 1/G), linear. G may be +infinity.
double sinr(const LinkBudget& budget, double geometry);

inline double to_db(double linear) noexcept { return 10.0 * std::log10(linear); }
inline double from_db(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) noexcept { return from_db(dbm - 30.0); }
inline double watts_to_dbm(double w) noexcept { return to_db(w) + 30.0; }

/// Maps a post-despreading SINR to the reported CQI for a BLER target.
///
/// The affine form is CQI = round(sinr_db / db_per_cqi + intercept + offset(bler)),
/// a breakpoint table overrides it with piecewise-constant steps. Both clamp to
/// [1, n_cqi].
class SinrToCqiMap {
public:
    struct Breakpoint {
        double sinr_db = 0.0;
        int cqi = 1;
    };

    static SinrToCqiMap affine(double db_per_cqi = 1.02, double intercept = 16.62,
                               std::map<int, double> offsets = default_offsets());
    static SinrToCqiMap from_breakpoints(std::map<int, std::vector<Breakpoint>> table);

    /// CSV `bler_target,sinr_db,cqi`. Throws ParseError or ConfigError.
    static SinrToCqiMap parse(std::string_view csv, const std::string& source = "<memory>");
    static SinrToCqiMap load(const std::filesystem::path& path);

    /// Per-target offsets in CQI units: 5 -> -0.5, 10 -> 0, 15 -> +0.3, 20 -> +0.5.
    static std::map<int, double> default_offsets();

    bool is_affine() const noexcept { return breakpoints_.empty(); }
    bool has_target(int bler_percent) const noexcept;
    std::vector<int> targets() const;

    double db_per_cqi() const noexcept { return db_per_cqi_; }
    double intercept() const noexcept { return intercept_; }
    const std::map<int, double>& offsets() const noexcept { return offsets_; }

    /// Throws ConfigError for an unknown target, std::domain_error for NaN input.
    int cqi(double sinr_db, int bler_percent, int n_cqi) const;

private:
    SinrToCqiMap() = default;
    void check_cross_target_order() const;

    double db_per_cqi_ = 1.02;
    double intercept_ = 16.62;
    std::map<int, double> offsets_;
    std::map<int, std::vector<Breakpoint>> breakpoints_;
};

int sinr_to_cqi(double sinr_db, int bler_percent, const SinrToCqiMap& map, int n_cqi);

/// Transmit-side radio parameters of the serving and neighbouring sites.
struct RadioParams {
    double bs_tx_power_w = 20.0;
    double other_bs_tx_power_w = 5.0;
    double hsdsch_power_w = 12.0;
    double antenna_gain_dbi = 11.5;
    double thermal_noise_dbm = -100.0;
    double orthogonality = 0.5;
};

/// Everything that stays fixed for one UE over a drop: its position and the
/// local mean (path loss + shadowing) received power from each site.
struct UeLink {
    Point position;
    std::vector<double> shadowing_db;      // one per site, serving first
    std::vector<double> mean_rx_power_w;   // full site transmit power, serving first
};

struct ChannelSample {
    LinkBudget budget;
    double geometry = 0.0;
    double fading_db = 0.0;
    double sinr_linear = 0.0;
    double sinr_db = 0.0;
    int cqi = 1;
};

/// Turns UE positions into CQI reports.
/// Holds no random state; callers pass their own engine.
class LinkModel {
public:
    LinkModel(CellLayout layout, RadioParams radio, PropagationConfig propagation, SinrToCqiMap map,
              int bler_percent, int n_cqi);

    /// Draws the per-site shadowing realisation (independent per site) and caches
    /// the mean received powers.
    UeLink attach(Point position, std::mt19937_64& rng) const;

    /// Same, with an explicit shadowing vector (one value per site).
    UeLink attach(Point position, std::vector<double> shadowing_db) const;

    /// One CQI report: draws a fading margin (if enabled) on the own-cell signal.
    ChannelSample sample(const UeLink& ue, std::mt19937_64& rng) const;

    /// Report for a given own-cell fading margin in dB.
    ChannelSample evaluate(const UeLink& ue, double fading_db) const;

    const CellLayout& layout() const noexcept { return layout_; }
    const PropagationConfig& propagation() const noexcept { return propagation_; }
    const RadioParams& radio() const noexcept { return radio_; }

private:
    CellLayout layout_;
    RadioParams radio_;
    PropagationConfig propagation_;
    SinrToCqiMap map_;
    int bler_percent_;
    int n_cqi_;
};

/// ITU Pedestrian A power-delay profile (relative power in dB, delay in ns).
struct Tap {
    double delay_ns;
    double power_db;
};
inline constexpr Tap kPedestrianA[] = {{0.0, 0.0}, {110.0, -9.7}, {190.0, -19.2}, {410.0, -22.8}};

/// Wideband power gain of one Pedestrian A realisation in dB, normalised so the
/// mean linear gain is 1.
double draw_pedestrian_a_fading_db(std::mt19937_64& rng);

/// One-shot channel draw: attaches a UE at `position` and returns one report.
ChannelSample sample_channel(Point position, const LinkModel& model, std::mt19937_64& rng);

}  // namespace hsmcast
