#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "holosens/experiment.hpp"

namespace holosens::cli {

/// Ordered key/value pairs. JSON input is flattened: nested objects join
/// keys with '.', arrays join values with ','.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

ConfigEntries parse_config_text(std::string_view text);
ConfigEntries load_config_file(const std::filesystem::path& path);

/// Keys mirror CampaignConfig fields; bounds are `bounds.<name> = lower,upper`.
/// Unknown keys and unparsable values throw InvalidArgument.
void apply_config(CampaignConfig& cfg, const ConfigEntries& entries);

nlohmann::ordered_json config_snapshot(const CampaignConfig& cfg);

}  // namespace holosens::cli
