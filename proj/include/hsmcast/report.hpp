#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsmcast/scenario.hpp"

namespace hsmcast {

// Figure-ready CSV writers with fixed decimals per column. An infinite GDI
// prints as "inf".

/// `level,percent` for every level of the table.
std::string cqi_histogram_csv(const CampaignResult& result);

/// `level,rate_kbps,codes,users` for every level the policy enabled at least once;
/// `users` is the mean number of users served at that level per RRM cycle.
std::string subgroups_csv(const CampaignResult& result, Policy policy);

/// `policy,drop,gdi_kbps,normalized_gdi,codes_used`, per-drop means over RRM cycles.
std::string gdi_csv(const CampaignResult& result);

/// Run summary as JSON: the config echo plus per-policy aggregates.
std::string summary_json(const CampaignResult& result);

/// Writes all of the above into `out_dir` (created if needed) and returns the
/// written paths. Throws std::runtime_error when a file cannot be written.
std::vector<std::filesystem::path> emit_reports(const CampaignResult& result, const std::filesystem::path& out_dir);

}  // namespace hsmcast
