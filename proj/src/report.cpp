#include "hsmcast/report.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hsmcast/config_io.hpp"

namespace hsmcast {

namespace {

std::string fixed(double v, int decimals)
{
    if (std::isinf(v)) return "inf";
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(decimals);
    out << v;
    return out.str();
}

nlohmann::json to_json(const Aggregate& a)
{
    if (a.infinite) return {{"mean", "inf"}, {"stddev", nullptr}};
    return {{"mean", a.mean}, {"stddev", a.stddev}};
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

std::string cqi_histogram_csv(const CampaignResult& result)
{
    std::string out = "level,percent\n";
    for (std::size_t k = 0; k < result.cqi_histogram_percent.size(); ++k) {
        out += std::to_string(k + 1) + "," + fixed(result.cqi_histogram_percent[k], 4) + "\n";
    }
    return out;
}

std::string subgroups_csv(const CampaignResult& result, Policy policy)
{
    const auto& agg = result.aggregate_for(policy);
    std::string out = "level,rate_kbps,codes,users\n";
    for (int k = 1; k <= result.table.n_cqi(); ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        if (agg.activation_share[idx] <= 0.0) continue;
        out += std::to_string(k) + "," + fixed(result.table.rate_kbps(k), 2) + "," +
               std::to_string(result.table.codes(k)) + "," + fixed(agg.mean_users_per_level[idx], 2) + "\n";
    }
    return out;
}

std::string gdi_csv(const CampaignResult& result)
{
    std::string out = "policy,drop,gdi_kbps,normalized_gdi,codes_used\n";
    for (Policy p : result.config.policies) {
        for (std::size_t d = 0; d < result.drops.size(); ++d) {
            const auto& run = result.drops[d].run(p);
            out += std::string(to_string(p)) + "," + std::to_string(d) + "," + fixed(run.mean_gdi().as_double(), 2) +
                   "," + fixed(run.mean_normalized_gdi().as_double(), 6) + "," + fixed(run.mean_codes(), 2) + "\n";
        }
    }
    return out;
}

std::string summary_json(const CampaignResult& result)
{
    nlohmann::ordered_json doc;
    nlohmann::ordered_json config;
    for (const auto& [key, value] : config_entries(result.config)) {
        // Numbers and booleans keep their JSON type; everything else stays text.
        auto parsed = nlohmann::ordered_json::parse(value, nullptr, false);
        config[key] = (!value.empty() && !parsed.is_discarded() && (parsed.is_number() || parsed.is_boolean()))
                          ? parsed
                          : nlohmann::ordered_json(value);
    }
    doc["config"] = config;
    doc["seeds"] = {{"master", result.config.seed}, {"drops", result.seeds}};
    doc["elapsed_ms_per_drop"] = result.drops.empty() ? 0.0 : result.drops.front().elapsed_ms;

    nlohmann::ordered_json policies = nlohmann::ordered_json::object();
    for (const auto& agg : result.policies) {
        nlohmann::ordered_json levels = nlohmann::ordered_json::array();
        for (int k = 1; k <= result.table.n_cqi(); ++k) {
            const auto idx = static_cast<std::size_t>(k - 1);
            if (agg.activation_share[idx] <= 0.0) continue;
            levels.push_back({{"level", k},
                              {"activation_share", agg.activation_share[idx]},
                              {"mean_users", agg.mean_users_per_level[idx]}});
        }
        policies[std::string(to_string(agg.policy))] = {{"gdi_kbps", to_json(agg.gdi_kbps)},
                                                        {"normalized_gdi", to_json(agg.normalized_gdi)},
                                                        {"codes_used", to_json(agg.codes_used)},
                                                        {"subgroups", levels}};
    }
    doc["policies"] = policies;
    doc["cqi_histogram_percent"] = result.cqi_histogram_percent;
    return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_reports(const CampaignResult& result, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = out_dir / name;
        write_file(path, content);
        written.push_back(path);
    };
    emit("cqi_histogram.csv", cqi_histogram_csv(result));
    for (Policy p : result.config.policies) {
        emit("subgroups_" + std::string(to_string(p)) + ".csv", subgroups_csv(result, p));
    }
    emit("gdi.csv", gdi_csv(result));
    emit("summary.json", summary_json(result));
    return written;
}

}  // namespace hsmcast
