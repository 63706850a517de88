#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lumsim/engine.hpp"
#include "lumsim/scenario.hpp"

namespace lumsim {

/// Contents of a `--config` file: engine constants plus optional scenario and output settings.
/// Keys absent from the file keep their defaults; unknown keys are rejected.
struct ConfigFile {
  SimulationConfig simulation;
  std::optional<Scenario> scenario;
  std::optional<std::string> out_dir;
};

/// Applies the JSON document on top of `base`. Relative file paths resolve against `base_dir`.
ConfigFile parse_config_json(std::string_view text, const SimulationConfig& base = {},
                             const std::filesystem::path& base_dir = {});
ConfigFile load_config_file(const std::filesystem::path& path, const SimulationConfig& base = {});

/// Effective configuration, echoed into output summaries. Catalog and archetypes are
/// summarized by size. The thread count is left out so that outputs do not depend on it;
/// everything else round-trips through parse_config_json.
nlohmann::json config_to_json(const SimulationConfig& config);

}  // namespace lumsim
