#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hsmcast/scenario.hpp"

namespace hsmcast {

/// Sets one scenario parameter from its text form. Keys mirror the scenario
/// parameter names (e.g. `cell_radius_m`, `hsdsch_power_w`, `bler_target`);
/// see README for the full list. Throws ConfigError.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` text, one setting per line, `#` starts a comment.
/// Starts from `base` so that later sources override earlier ones.
ScenarioConfig parse_config_text(std::string_view text, const std::string& source, ScenarioConfig base = {});

/// JSON object of settings, or a summary.json whose "config" member holds them.
ScenarioConfig parse_config_json(std::string_view text, const std::string& source, ScenarioConfig base = {});

/// Reads either format (JSON when the first non-blank character is '{').
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

/// Every setting as (key, text value), in documentation order.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config);

std::string to_config_text(const ScenarioConfig& config);

std::string policies_to_string(const std::vector<Policy>& policies);
std::vector<Policy> parse_policy_selector(std::string_view s);  // sg|gb|egb|all or comma list

}  // namespace hsmcast
