#include "hsmcast/config_io.hpp"

#include <charconv>
#include <functional>
#include <json.hpp>

#include "hsmcast/errors.hpp"
#include "text_util.hpp"

namespace hsmcast {

namespace {

std::string fmt_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T>
T number(std::string_view key, std::string_view value)
{
    const auto v = detail::parse_number<T>(value);
    if (!v) throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
    return *v;
}

bool boolean(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

struct Field {
    const char* key;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

#define HSM_DOUBLE(name, member)                                                                 \
    Field                                                                                        \
    {                                                                                            \
        name, [](ScenarioConfig& c, std::string_view v) { c.member = number<double>(name, v); }, \
            [](const ScenarioConfig& c) { return fmt_double(c.member); }                         \
    }
#define HSM_INT(name, member)                                                                 \
    Field                                                                                     \
    {                                                                                         \
        name, [](ScenarioConfig& c, std::string_view v) { c.member = number<int>(name, v); }, \
            [](const ScenarioConfig& c) { return std::to_string(c.member); }                  \
    }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table{
        HSM_DOUBLE("cell_radius_m", cell_radius_m),
        HSM_INT("num_neighbors", num_neighbors),
        HSM_INT("num_ues", num_ues),
        {"poisson_ues", [](ScenarioConfig& c, std::string_view v) { c.poisson_ues = boolean("poisson_ues", v); },
         [](const ScenarioConfig& c) { return std::string(c.poisson_ues ? "true" : "false"); }},
        HSM_DOUBLE("bs_tx_power_w", radio.bs_tx_power_w),
        HSM_DOUBLE("other_bs_tx_power_w", radio.other_bs_tx_power_w),
        HSM_DOUBLE("common_channel_power_w", common_channel_power_w),
        HSM_DOUBLE("hsdsch_power_w", radio.hsdsch_power_w),
        HSM_DOUBLE("antenna_gain_dbi", radio.antenna_gain_dbi),
        HSM_DOUBLE("orthogonality", radio.orthogonality),
        HSM_DOUBLE("thermal_noise_dbm", radio.thermal_noise_dbm),
        HSM_INT("bler_target", bler_target),
        HSM_INT("max_codes", max_codes),
        HSM_INT("gb_subgroups", gb_subgroups),
        {"normalizer",
         [](ScenarioConfig& c, std::string_view v) {
             if (v == "mean") c.normalizer = GdiNormalizer::MeanSupportedRate;
             else if (v == "max") c.normalizer = GdiNormalizer::MaxSupportedRate;
             else throw ConfigError("normalizer must be 'mean' or 'max'");
         },
         [](const ScenarioConfig& c) {
             return std::string(c.normalizer == GdiNormalizer::MeanSupportedRate ? "mean" : "max");
         }},
        {"cqi_table", [](ScenarioConfig& c, std::string_view v) { c.cqi_table_path = std::string(v); },
         [](const ScenarioConfig& c) { return c.cqi_table_path; }},
        {"sinr_cqi_map", [](ScenarioConfig& c, std::string_view v) { c.sinr_map_path = std::string(v); },
         [](const ScenarioConfig& c) { return c.sinr_map_path; }},
        HSM_DOUBLE("cqi_db_per_level", cqi_db_per_level),
        HSM_DOUBLE("cqi_intercept", cqi_intercept),
        HSM_DOUBLE("carrier_frequency_mhz", propagation.carrier_frequency_mhz),
        HSM_DOUBLE("bs_height_m", propagation.bs_height_m),
        HSM_DOUBLE("ue_height_m", propagation.ue_height_m),
        HSM_DOUBLE("metro_correction_db", propagation.metro_correction_db),
        HSM_DOUBLE("shadowing_sigma_db", propagation.shadowing_sigma_db),
        {"fading", [](ScenarioConfig& c, std::string_view v) { c.propagation.fading = parse_fading_mode(v); },
         [](const ScenarioConfig& c) { return std::string(to_string(c.propagation.fading)); }},
        HSM_DOUBLE("ue_speed_kmh", propagation.ue_speed_kmh),
        HSM_DOUBLE("min_distance_m", propagation.min_distance_m),
        HSM_INT("num_ttis", num_ttis),
        HSM_INT("feedback_period", feedback_period),
        HSM_INT("rrm_period", rrm_period),
        {"seed", [](ScenarioConfig& c, std::string_view v) { c.seed = number<std::uint64_t>("seed", v); },
         [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
        HSM_INT("drops", drops),
        {"policy", [](ScenarioConfig& c, std::string_view v) { c.policies = parse_policy_selector(v); },
         [](const ScenarioConfig& c) { return policies_to_string(c.policies); }},
    };
    return table;
}

#undef HSM_DOUBLE
#undef HSM_INT

constexpr std::string_view kOffsetPrefix = "cqi_offset_";

}  // namespace

std::string policies_to_string(const std::vector<Policy>& policies)
{
    std::string out;
    for (Policy p : policies) {
        if (!out.empty()) out += ',';
        out += to_string(p);
    }
    return out;
}

std::vector<Policy> parse_policy_selector(std::string_view s)
{
    if (s == "all") return {std::begin(kAllPolicies), std::end(kAllPolicies)};
    std::vector<Policy> out;
    for (auto part : detail::split(s, ',')) {
        const Policy p = parse_policy(part);
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value)
{
    key = detail::trim(key);
    value = detail::trim(value);
    if (key.substr(0, kOffsetPrefix.size()) == kOffsetPrefix) {
        const int target = number<int>(key, key.substr(kOffsetPrefix.size()));
        config.cqi_offsets[target] = number<double>(key, value);
        return;
    }
    for (const auto& f : fields()) {
        if (key == f.key) {
            f.set(config, value);
            return;
        }
    }
    throw ConfigError("unknown setting '" + std::string(key) + "'");
}

ScenarioConfig parse_config_text(std::string_view text, const std::string& source, ScenarioConfig base)
{
    const auto all = detail::lines(text);
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto line = all[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, i + 1, "expected 'key = value'");
        try {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ParseError(source, i + 1, e.what());
        }
    }
    return base;
}

ScenarioConfig parse_config_json(std::string_view text, const std::string& source, ScenarioConfig base)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source, 1, e.what());
    }
    if (doc.is_object() && doc.contains("config")) doc = doc.at("config");
    if (!doc.is_object()) throw ParseError(source, 1, "expected a JSON object of settings");
    for (const auto& [key, value] : doc.items()) {
        std::string text_value;
        if (value.is_string()) text_value = value.get<std::string>();
        else if (value.is_boolean()) text_value = value.get<bool>() ? "true" : "false";
        else if (value.is_number_float()) text_value = fmt_double(value.get<double>());
        else if (value.is_number()) text_value = value.dump();
        else throw ParseError(source, 1, "unsupported value for '" + key + "'");
        try {
            apply_setting(base, key, text_value);
        } catch (const ConfigError& e) {
            throw ParseError(source, 1, e.what());
        }
    }
    return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base)
{
    std::string text;
    try {
        text = detail::read_file(path.string());
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    const auto body = detail::trim(text);
    if (!body.empty() && body.front() == '{') return parse_config_json(text, path.string(), std::move(base));
    return parse_config_text(text, path.string(), std::move(base));
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.get(config));
    for (const auto& [target, offset] : config.cqi_offsets) {
        out.emplace_back(std::string(kOffsetPrefix) + std::to_string(target), fmt_double(offset));
    }
    return out;
}

std::string to_config_text(const ScenarioConfig& config)
{
    std::string out;
    for (const auto& [k, v] : config_entries(config)) out += k + " = " + v + "\n";
    return out;
}

}  // namespace hsmcast
