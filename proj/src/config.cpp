#include "lumsim/config.hpp"

#include <fstream>
#include <sstream>

#include "lumsim/errors.hpp"

namespace lumsim {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, _] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError(where_ + ": unknown key '" + key + "'");
      }
    }
  }

  void number(const char* key, double& out) const {
    if (!obj_.contains(key)) return;
    if (!obj_[key].is_number()) throw ConfigError(path(key) + ": expected a number");
    out = obj_[key].get<double>();
  }

  template <typename Int>
  void integer(const char* key, Int& out) const {
    if (!obj_.contains(key)) return;
    const auto& v = obj_[key];
    if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    if (v.is_number_unsigned()) {
      out = static_cast<Int>(v.get<std::uint64_t>());
    } else {
      const auto x = v.get<std::int64_t>();
      if constexpr (std::is_unsigned_v<Int>) {
        if (x < 0) throw ConfigError(path(key) + ": must be non-negative");
      }
      out = static_cast<Int>(x);
    }
  }

  void boolean(const char* key, bool& out) const {
    if (!obj_.contains(key)) return;
    if (!obj_[key].is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    out = obj_[key].get<bool>();
  }

  std::optional<std::string> string(const char* key) const {
    if (!obj_.contains(key)) return std::nullopt;
    if (!obj_[key].is_string()) throw ConfigError(path(key) + ": expected a string");
    return obj_[key].get<std::string>();
  }

  std::optional<Reader> child(const char* key) const {
    if (!obj_.contains(key)) return std::nullopt;
    return Reader(obj_[key], path(key));
  }

  const json& raw(const char* key) const { return obj_.at(key); }
  bool has(const char* key) const { return obj_.contains(key); }

 private:
  std::string path(const char* key) const { return where_ + "." + key; }

  const json& obj_;
  std::string where_;
};

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

}  // namespace

ConfigFile parse_config_json(std::string_view text, const SimulationConfig& base,
                             const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  ConfigFile out{base, std::nullopt, std::nullopt};
  SimulationConfig& cfg = out.simulation;

  const Reader root(doc, "config");
  root.allow({"scenario", "out", "runs", "seed", "agents", "months", "jobs", "social_sample_size",
              "thresholds", "satisfaction", "learning", "market", "archetype_file",
              "archetype_count", "archetype_seed", "catalog_file"});
  root.integer("runs", cfg.runs);
  root.integer("seed", cfg.master_seed);
  root.integer("agents", cfg.n_agents);
  root.integer("months", cfg.months);
  root.integer("jobs", cfg.jobs);
  root.integer("social_sample_size", cfg.social_sample_size);
  root.integer("archetype_count", cfg.archetype_count);
  root.integer("archetype_seed", cfg.archetype_seed);
  out.out_dir = root.string("out");

  if (root.has("scenario")) {
    const auto& s = root.raw("scenario");
    if (s.is_string()) {
      out.scenario = resolve_scenario(s.get<std::string>());
    } else if (s.is_object()) {
      out.scenario = parse_scenario_json(s.dump());
    } else {
      throw ConfigError("config.scenario: expected an id, a file path or a scenario object");
    }
  }
  if (auto p = root.string("archetype_file")) {
    cfg.archetypes = load_archetypes_csv(resolve(base_dir, *p));
  }
  if (auto p = root.string("catalog_file")) {
    cfg.catalog = Catalog::load_csv(resolve(base_dir, *p));
  }

  if (auto t = root.child("thresholds")) {
    t->allow({"satisfaction", "certainty", "initial_similarity", "loosening_factor",
              "max_peer_attempts"});
    t->number("satisfaction", cfg.thresholds.satisfaction);
    t->number("certainty", cfg.thresholds.certainty);
    t->number("initial_similarity", cfg.thresholds.initial_similarity);
    t->number("loosening_factor", cfg.thresholds.loosening_factor);
    t->integer("max_peer_attempts", cfg.thresholds.max_peer_attempts);
  }
  if (auto s = root.child("satisfaction")) {
    s->allow({"weights", "include_lifetime", "experience_weight", "social_scale",
              "price_scoring", "price_reference", "ramp_up_cap", "lifetime_cap"});
    if (auto w = s->child("weights")) {
      w->allow({"price", "efficiency", "colour", "ramp_up", "lifetime"});
      w->number("price", cfg.satisfaction.weights.price);
      w->number("efficiency", cfg.satisfaction.weights.efficiency);
      w->number("colour", cfg.satisfaction.weights.colour);
      w->number("ramp_up", cfg.satisfaction.weights.ramp_up);
      w->number("lifetime", cfg.satisfaction.weights.lifetime);
    }
    s->boolean("include_lifetime", cfg.satisfaction.include_lifetime);
    s->number("experience_weight", cfg.satisfaction.experience_weight);
    s->number("social_scale", cfg.satisfaction.social_scale);
    if (auto scoring = s->string("price_scoring")) {
      if (*scoring == "reference") {
        cfg.satisfaction.price_scoring = PriceScoring::Reference;
      } else if (*scoring == "relative") {
        cfg.satisfaction.price_scoring = PriceScoring::Relative;
      } else {
        throw ConfigError("config.satisfaction.price_scoring: expected 'reference' or 'relative'");
      }
    }
    s->number("price_reference", cfg.satisfaction.price_reference);
    s->number("ramp_up_cap", cfg.satisfaction.ramp_up_cap);
    s->number("lifetime_cap", cfg.satisfaction.lifetime_cap);
  }
  if (auto l = root.child("learning")) {
    l->allow({"experience_rate", "certainty_rate", "unavailable_penalty"});
    l->number("experience_rate", cfg.learning.experience_rate);
    l->number("certainty_rate", cfg.learning.certainty_rate);
    l->number("unavailable_penalty", cfg.learning.unavailable_penalty);
  }
  if (auto m = root.child("market")) {
    m->allow({"led_introduction_year", "led_price_decline", "led_price_steps",
              "led_efficiency_growth", "led_efficiency_steps", "efficiency_cap"});
    m->integer("led_introduction_year", cfg.trends.led_introduction_year);
    m->number("led_price_decline", cfg.trends.led_price_decline);
    m->integer("led_price_steps", cfg.trends.led_price_steps);
    m->number("led_efficiency_growth", cfg.trends.led_efficiency_growth);
    m->integer("led_efficiency_steps", cfg.trends.led_efficiency_steps);
    m->number("efficiency_cap", cfg.trends.efficiency_cap);
  }
  cfg.validate();
  return out;
}

ConfigFile load_config_file(const std::filesystem::path& path, const SimulationConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_json(ss.str(), base, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json config_to_json(const SimulationConfig& c) {
  const auto& w = c.satisfaction.weights;
  return {
      {"runs", c.runs},
      {"seed", c.master_seed},
      {"agents", c.n_agents},
      {"months", c.months},
      {"social_sample_size", c.social_sample_size},
      {"archetype_count", c.archetypes.empty() ? c.archetype_count : c.archetypes.size()},
      {"archetype_seed", c.archetype_seed},
      {"thresholds",
       {{"satisfaction", c.thresholds.satisfaction},
        {"certainty", c.thresholds.certainty},
        {"initial_similarity", c.thresholds.initial_similarity},
        {"loosening_factor", c.thresholds.loosening_factor},
        {"max_peer_attempts", c.thresholds.max_peer_attempts}}},
      {"satisfaction",
       {{"weights",
         {{"price", w.price},
          {"efficiency", w.efficiency},
          {"colour", w.colour},
          {"ramp_up", w.ramp_up},
          {"lifetime", w.lifetime}}},
        {"include_lifetime", c.satisfaction.include_lifetime},
        {"experience_weight", c.satisfaction.experience_weight},
        {"social_scale", c.satisfaction.social_scale},
        {"price_scoring",
         c.satisfaction.price_scoring == PriceScoring::Relative ? "relative" : "reference"},
        {"price_reference", c.satisfaction.price_reference},
        {"ramp_up_cap", c.satisfaction.ramp_up_cap},
        {"lifetime_cap", c.satisfaction.lifetime_cap}}},
      {"learning",
       {{"experience_rate", c.learning.experience_rate},
        {"certainty_rate", c.learning.certainty_rate},
        {"unavailable_penalty", c.learning.unavailable_penalty}}},
      {"market",
       {{"led_introduction_year", c.trends.led_introduction_year},
        {"led_price_decline", c.trends.led_price_decline},
        {"led_price_steps", c.trends.led_price_steps},
        {"led_efficiency_growth", c.trends.led_efficiency_growth},
        {"led_efficiency_steps", c.trends.led_efficiency_steps},
        {"efficiency_cap", c.trends.efficiency_cap}}},
  };
}

}  // namespace lumsim
