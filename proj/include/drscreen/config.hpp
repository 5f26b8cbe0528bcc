#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "drscreen/harness.hpp"

namespace drscreen {

/// Parses the experiment config document. Unknown keys anywhere are hard
/// errors; vocabulary problems name the offending key. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Loads the file, applies `key=value` overrides (dotted paths into
/// objects, values parsed as JSON scalars with a string fallback), then
/// parses.
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  const std::vector<std::string>& overrides = {});

void apply_override(nlohmann::json& doc, const std::string& key_equals_value);

/// Round-trips the resolved config back into the document form; this is
/// what the run manifest embeds.
nlohmann::ordered_json encode_config(const ExperimentConfig& config);

}  // namespace drscreen
