#include "hsmcast/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>

#include "hsmcast/config_io.hpp"
#include "hsmcast/errors.hpp"
#include "hsmcast/report.hpp"

namespace hsmcast {

namespace {

std::string one_line(std::string s)
{
    for (auto& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

void check_writable(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CliError("output directory " + dir.string() + " is not writable: " + ec.message(), 1);
    const auto probe = dir / ".hsmcast_write_probe";
    {
        std::ofstream f(probe);
        if (!f) throw CliError("output directory " + dir.string() + " is not writable", 1);
    }
    std::filesystem::remove(probe, ec);
}

}  // namespace

ParsedCommandLine parse_and_validate(const std::vector<std::string>& args)
{
    CLI::App app{"HSDPA multicast subgrouping simulator (SG, GB and E-GB policies)", "hsmcast_sim"};
    ParsedCommandLine parsed;
    auto& o = parsed.options;

    std::string config_path;
    std::string policy = "all";
    std::uint64_t seed = 0;
    int drops = 0, ttis = 0, bler = 0, gb = 0, codes = 0;
    std::string fading;
    std::string out_dir = "results";

    auto* opt_config = app.add_option("--config", config_path, "Scenario file (key = value text or JSON)");
    auto* opt_policy = app.add_option("--policy", policy, "Policies to run")
                           ->check(CLI::IsMember({"sg", "gb", "egb", "all"}));
    auto* opt_seed = app.add_option("--seed", seed, "Master seed");
    auto* opt_drops = app.add_option("--drops", drops, "Monte Carlo drops")->check(CLI::PositiveNumber);
    auto* opt_ttis = app.add_option("--ttis", ttis, "TTIs simulated per drop")->check(CLI::PositiveNumber);
    auto* opt_bler = app.add_option("--bler", bler, "BLER target in percent")
                         ->check(CLI::IsMember({5, 10, 15, 20}));
    auto* opt_gb = app.add_option("--gb-subgroups", gb, "Subgroup count of the GB policy")->check(CLI::PositiveNumber);
    auto* opt_codes = app.add_option("--max-codes", codes, "Channelization code budget M")->check(CLI::Range(1, 15));
    app.add_option("--out", out_dir, "Output directory");
    auto* opt_fading = app.add_option("--fading", fading, "Fast fading model")->check(CLI::IsMember({"off", "peda"}));
    app.add_option("--threads", o.threads, "Worker threads for drops (0 = all cores)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw CliError(app.help(), 0);
    } catch (const CLI::ParseError& e) {
        throw CliError(e.what(), 2);
    }

    if (*opt_config) o.config_path = config_path;
    o.policies = parse_policy_selector(policy);
    if (*opt_seed) o.seed = seed;
    if (*opt_drops) o.drops = drops;
    if (*opt_ttis) o.ttis = ttis;
    if (*opt_bler) o.bler_target = bler;
    if (*opt_gb) o.gb_subgroups = gb;
    if (*opt_codes) o.max_codes = codes;
    if (*opt_fading) o.fading = fading;
    o.out_dir = out_dir;

    try {
        ScenarioConfig c;
        if (o.config_path) c = load_config(*o.config_path, c);
        if (*opt_policy || !o.config_path) c.policies = o.policies;
        if (o.seed) c.seed = *o.seed;
        if (o.drops) c.drops = *o.drops;
        if (o.ttis) c.num_ttis = *o.ttis;
        if (o.bler_target) c.bler_target = *o.bler_target;
        if (o.gb_subgroups) c.gb_subgroups = *o.gb_subgroups;
        if (o.max_codes) c.max_codes = *o.max_codes;
        if (o.fading) c.propagation.fading = parse_fading_mode(*o.fading);
        c.validate();
        // Resolve table and SINR map paths now so bad files fail before simulating.
        Scenario probe(c);
        parsed.config = c;
    } catch (const std::exception& e) {
        throw CliError(e.what(), 2);
    }
    parsed.options.policies = parsed.config.policies;
    return parsed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        const auto parsed = parse_and_validate(args);
        check_writable(parsed.options.out_dir);
        const auto result = run_campaign(parsed.config, parsed.options.threads);
        const auto files = emit_reports(result, parsed.options.out_dir);
        for (const auto& agg : result.policies) {
            out << to_string(agg.policy) << ": gdi " << (agg.gdi_kbps.infinite ? std::string("inf") : std::to_string(agg.gdi_kbps.mean))
                << " kbps, normalized " << (agg.normalized_gdi.infinite ? std::string("inf") : std::to_string(agg.normalized_gdi.mean))
                << ", codes " << agg.codes_used.mean << "\n";
        }
        out << "wrote " << files.size() << " files to " << parsed.options.out_dir.string() << "\n";
        return 0;
    } catch (const CliError& e) {
        if (e.exit_code() == 0) {
            out << e.what();
            return 0;
        }
        err << "hsmcast_sim: " << one_line(e.what()) << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "hsmcast_sim: " << one_line(e.what()) << "\n";
        return 1;
    }
}

}  // namespace hsmcast
