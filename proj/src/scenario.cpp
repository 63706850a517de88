#include "lumsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lumsim/agents.hpp"
#include "lumsim/errors.hpp"

namespace lumsim {

using nlohmann::json;

bool Scenario::is_banned(LampType type, int year) const {
  return std::any_of(bans.begin(), bans.end(),
                     [&](const BanIntervention& b) { return b.type == type && year >= b.year; });
}

namespace {

std::string valid_ids() {
  std::string out;
  for (auto id : kBuiltinScenarioIds) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

const PriceIntervention kSoftBanPrice{LampType::Incandescent, 2013, 2018, 0.10};
const PriceIntervention kHardBanPrice{LampType::Incandescent, 2012, 2014, 0.20};
const BanIntervention kHardBan{LampType::Incandescent, 2015};
const PreferenceIntervention kCampaign{{Trait::FinancialFocus, Trait::EnvironmentalFocus}, 2012, 1.5};

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  for (auto key : allowed) {
    if (!obj.contains(std::string(key))) {
      throw ConfigError(where + ": missing key '" + std::string(key) + "'");
    }
  }
}

int get_int(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

LampType get_type(const json& obj, const std::string& where) {
  const auto& v = obj.at("type");
  if (!v.is_string()) throw ConfigError(where + ".type: expected a string");
  const auto t = parse_lamp_type(v.get<std::string>());
  if (!t) {
    throw ConfigError(where + ".type: unknown lamp type '" + v.get<std::string>() +
                      "' (expected Incandescent, CFL or LED)");
  }
  return *t;
}

const json& get_array(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected an array");
  return v;
}

}  // namespace

Scenario builtin_scenario(std::string_view id) {
  Scenario s;
  s.id = std::string(id);
  if (id == "no_regulation") return s;
  if (id == "soft_ban") {
    s.price = {kSoftBanPrice};
  } else if (id == "hard_ban") {
    s.price = {kHardBanPrice};
    s.bans = {kHardBan};
  } else if (id == "info_campaign") {
    s.preferences = {kCampaign};
  } else if (id == "soft_ban_info") {
    s.price = {kSoftBanPrice};
    s.preferences = {kCampaign};
  } else {
    throw ConfigError("unknown scenario '" + std::string(id) + "'; valid ids: " + valid_ids());
  }
  return s;
}

Scenario resolve_scenario(const std::string& id_or_path) {
  if (std::find(kBuiltinScenarioIds.begin(), kBuiltinScenarioIds.end(), id_or_path) !=
      kBuiltinScenarioIds.end()) {
    return builtin_scenario(id_or_path);
  }
  if (id_or_path.ends_with(".json") && std::filesystem::exists(id_or_path)) {
    return load_scenario_file(id_or_path);
  }
  throw ConfigError("unknown scenario '" + id_or_path + "'; valid ids: " + valid_ids() +
                    " (or a path to a .json scenario file)");
}

Scenario parse_scenario_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  check_keys(doc, {"id", "price", "ban", "preference"}, "scenario");
  Scenario s;
  if (!doc["id"].is_string() || doc["id"].get<std::string>().empty()) {
    throw ConfigError("scenario.id: expected a non-empty string");
  }
  s.id = doc["id"].get<std::string>();

  const auto& price = get_array(doc, "price");
  for (std::size_t i = 0; i < price.size(); ++i) {
    const std::string where = "price[" + std::to_string(i) + "]";
    check_keys(price[i], {"type", "from", "to", "rate"}, where);
    PriceIntervention p{get_type(price[i], where), get_int(price[i], "from", where),
                        get_int(price[i], "to", where), get_number(price[i], "rate", where)};
    if (p.to_year < p.from_year) throw ConfigError(where + ": 'to' precedes 'from'");
    if (p.annual_rate <= -1.0) throw ConfigError(where + ".rate: must exceed -1");
    s.price.push_back(p);
  }

  const auto& ban = get_array(doc, "ban");
  for (std::size_t i = 0; i < ban.size(); ++i) {
    const std::string where = "ban[" + std::to_string(i) + "]";
    check_keys(ban[i], {"type", "year"}, where);
    s.bans.push_back({get_type(ban[i], where), get_int(ban[i], "year", where)});
  }

  const auto& pref = get_array(doc, "preference");
  for (std::size_t i = 0; i < pref.size(); ++i) {
    const std::string where = "preference[" + std::to_string(i) + "]";
    check_keys(pref[i], {"fields", "year", "multiplier"}, where);
    PreferenceIntervention p;
    const auto& fields = pref[i]["fields"];
    if (!fields.is_array() || fields.empty()) {
      throw ConfigError(where + ".fields: expected a non-empty array");
    }
    for (const auto& f : fields) {
      const auto trait = f.is_string() ? parse_trait(f.get<std::string>()) : std::nullopt;
      if (!trait || *trait == Trait::LampsNeeded) {
        throw ConfigError(where + ".fields: unknown or non-fractional trait " + f.dump());
      }
      p.fields.push_back(*trait);
    }
    p.year = get_int(pref[i], "year", where);
    p.multiplier = get_number(pref[i], "multiplier", where);
    if (p.multiplier < 0) throw ConfigError(where + ".multiplier: must be non-negative");
    s.preferences.push_back(std::move(p));
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_json(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["id"] = s.id;
  doc["price"] = json::array();
  for (const auto& p : s.price) {
    doc["price"].push_back({{"type", std::string(to_string(p.type))},
                            {"from", p.from_year},
                            {"to", p.to_year},
                            {"rate", p.annual_rate}});
  }
  doc["ban"] = json::array();
  for (const auto& b : s.bans) {
    doc["ban"].push_back({{"type", std::string(to_string(b.type))}, {"year", b.year}});
  }
  doc["preference"] = json::array();
  for (const auto& p : s.preferences) {
    json fields = json::array();
    for (Trait t : p.fields) fields.push_back(std::string(kTraitColumns[static_cast<std::size_t>(t)]));
    doc["preference"].push_back({{"fields", fields}, {"year", p.year}, {"multiplier", p.multiplier}});
  }
  return doc.dump(2) + "\n";
}

void apply_preference_intervention(std::span<Agent> population,
                                   const PreferenceIntervention& intervention) {
  for (Agent& agent : population) {
    for (Trait t : intervention.fields) {
      agent.preferences[t] = std::min(1.0, agent.preferences[t] * intervention.multiplier);
    }
  }
}

}  // namespace lumsim
