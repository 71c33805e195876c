#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "frmsm/matcher.hpp"
#include "frmsm/pipeline.hpp"

namespace frmsm {

struct AppConfig {
  PipelineConfig pipeline;
  MatchConfig match;
};

// Known keys, e.g. "threshold", "r_tol", "decision_threshold". Dashes and
// underscores are interchangeable.
const std::vector<std::string>& config_keys();

// Parses `value` for `key` into cfg. Unknown keys and unparsable values are
// rejected with InvalidConfig; range checks happen in validate().
void apply_setting(AppConfig& cfg, std::string_view key, std::string_view value);

// Numeric view of a setting; booleans read as 1 or 0 and an unset
// max_iterations as 0.
double config_value(const AppConfig& cfg, std::string_view key);

// `key = value` lines; `#` starts a comment; values may be double-quoted.
void apply_config_text(AppConfig& cfg, std::string_view text, const std::string& source_name);
void load_config_file(AppConfig& cfg, const std::filesystem::path& path);

void validate(const AppConfig& cfg);

}  // namespace frmsm
