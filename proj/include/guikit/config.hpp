#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "guikit/matching.hpp"

namespace guikit {

/// Flat `key = value` text; `#` starts a comment. Keys:
///   threshold, tap_threshold, distance (euclidean|chebyshev),
///   text_policy (lenient|strict), scroll_mode (axis|strict),
///   aggregation (subset_mean|step_weighted), text_in_overall (true|false)
void apply_config_entry(MatchConfig& cfg, std::string_view key, std::string_view value);
MatchConfig parse_config(std::string_view text, MatchConfig base = {},
                         const std::string& source = "<config>");
MatchConfig load_config(const std::filesystem::path& path, MatchConfig base = {});
std::string to_config_text(const MatchConfig& cfg);

}  // namespace guikit
