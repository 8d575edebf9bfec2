#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hsmcast/scenario.hpp"

namespace hsmcast {

struct CliOptions {
    std::optional<std::filesystem::path> config_path;
    std::vector<Policy> policies;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::optional<int> ttis;
    std::optional<int> bler_target;
    std::optional<int> gb_subgroups;
    std::optional<int> max_codes;
    std::optional<std::string> fading;
    std::filesystem::path out_dir = "results";
    int threads = 0;
};

struct ParsedCommandLine {
    CliOptions options;
    ScenarioConfig config;  // defaults < config file < flags, validated
};

/// Thrown for bad arguments; carries the intended process exit code.
class CliError : public std::runtime_error {
public:
    CliError(const std::string& what, int exit_code) : std::runtime_error(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

/// Parses flags over the config file and defaults, then validates everything
/// before any simulation starts. `--help` raises CliError with exit
/// code 0 and the help text as message.
ParsedCommandLine parse_and_validate(const std::vector<std::string>& args);

/// Full command: parse, run the campaign, write reports. Returns the exit code;
/// diagnostics go to `err` as a single line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hsmcast
