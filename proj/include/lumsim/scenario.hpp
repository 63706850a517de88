#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lumsim/catalog.hpp"
#include "lumsim/preferences.hpp"

namespace lumsim {

struct Agent;

/// Compound annual price change for one lamp type, applied each January from `from_year`
/// through `to_year` inclusive. The rate is scaled by the run's factor for that type.
struct PriceIntervention {
  LampType type = LampType::Incandescent;
  int from_year = 0;
  int to_year = 0;
  double annual_rate = 0.0;

  bool operator==(const PriceIntervention&) const = default;
};

/// Removes a lamp type from the market from January of `year` onwards.
struct BanIntervention {
  LampType type = LampType::Incandescent;
  int year = 0;

  bool operator==(const BanIntervention&) const = default;
};

/// Multiplies the named traits of every agent in January of `year`, clamped to 1.
struct PreferenceIntervention {
  std::vector<Trait> fields;
  int year = 0;
  double multiplier = 1.0;

  bool operator==(const PreferenceIntervention&) const = default;
};

struct Scenario {
  std::string id;
  std::vector<PriceIntervention> price;
  std::vector<BanIntervention> bans;
  std::vector<PreferenceIntervention> preferences;

  bool operator==(const Scenario&) const = default;

  /// True when `type` is banned in `year`.
  bool is_banned(LampType type, int year) const;
};

inline constexpr std::array<std::string_view, 5> kBuiltinScenarioIds{
    "no_regulation", "soft_ban", "hard_ban", "info_campaign", "soft_ban_info"};

/// Throws ConfigError naming the valid ids when `id` is unknown.
Scenario builtin_scenario(std::string_view id);

/// Accepts a built-in id or a path to a JSON scenario file.
Scenario resolve_scenario(const std::string& id_or_path);

Scenario parse_scenario_json(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);
/// Multiplies each named trait of every agent, clamping at 1.
void apply_preference_intervention(std::span<Agent> population,
                                   const PreferenceIntervention& intervention);

/// Canonical form: two-space indent, sorted keys, trailing newline.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace lumsim
