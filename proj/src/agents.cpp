#include "lumsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lumsim/csv.hpp"
#include "lumsim/errors.hpp"

namespace lumsim {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Repetition:
      return "repetition";
    case Strategy::Imitation:
      return "imitation";
    case Strategy::Deliberation:
      return "deliberation";
    case Strategy::SocialComparison:
      return "social_comparison";
  }
  return "?";
}

std::optional<Trait> parse_trait(std::string_view column) {
  for (std::size_t i = 0; i < kTraitCount; ++i) {
    if (kTraitColumns[i] == column) return static_cast<Trait>(i);
  }
  return std::nullopt;
}

double Agent::baseline(LampType type) const {
  switch (type) {
    case LampType::Incandescent:
      return preferences[Trait::BaselineIncandescent];
    case LampType::CFL:
      return preferences[Trait::BaselineCfl];
    case LampType::LED:
      return preferences[Trait::BaselineLed];
  }
  return 0.0;
}

LampType Agent::modal_type(const Catalog& catalog) const {
  std::array<int, kLampTypeCount> counts{};
  for (const auto& lamp : inventory) ++counts[index_of(catalog.at(lamp.model_id).type)];
  const auto best = std::max_element(counts.begin(), counts.end());
  return static_cast<LampType>(best - counts.begin());
}

PropertyTable::PropertyTable(const MarketState& state, const SatisfactionParams& params) {
  const Catalog& catalog = state.catalog();
  scores_.reserve(catalog.size());
  double cheapest = INFINITY;
  for (std::size_t id : state.available_models()) cheapest = std::min(cheapest, state.price(id));
  for (const auto& m : catalog) {
    std::array<double, kProperties> s{};
    if (params.price_scoring == PriceScoring::Relative) {
      s[0] = std::isfinite(cheapest) ? std::clamp(cheapest / state.price(m.id), 0.0, 1.0) : 0.0;
    } else {
      s[0] = std::clamp(1.0 - state.price(m.id) / params.price_reference, 0.0, 1.0);
    }
    s[1] = std::clamp(state.efficiency(m.id), 0.0, 1.0);
    s[2] = std::clamp(1.0 - m.colour_discrepancy, 0.0, 1.0);
    s[3] = 1.0 - std::min(m.ramp_up, params.ramp_up_cap) / params.ramp_up_cap;
    s[4] = std::min(m.mean_lifetime, params.lifetime_cap) / params.lifetime_cap;
    scores_.push_back(s);
  }
}

std::array<double, PropertyTable::kProperties> personal_weights(const Preferences& prefs,
                                                                const SatisfactionParams& params) {
  const auto& w = params.weights;
  const double fin = prefs[Trait::FinancialFocus];
  const double env = prefs[Trait::EnvironmentalFocus];
  std::array<double, PropertyTable::kProperties> out{
      w.price * (1.0 + fin),
      w.efficiency * (fin + env),
      w.colour * (1.0 - prefs[Trait::ColourTolerance]),
      w.ramp_up * (1.0 - prefs[Trait::FunctionalTolerance]),
      params.include_lifetime ? w.lifetime : 0.0,
  };
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x = total > 0 ? x / total : 0.0;
  return out;
}

SocialContext SocialContext::from_types(std::span<const LampType> peer_modal_types) {
  SocialContext ctx;
  if (peer_modal_types.empty()) return ctx;
  for (LampType t : peer_modal_types) ctx.modal_share[index_of(t)] += 1.0;
  for (double& s : ctx.modal_share) s /= static_cast<double>(peer_modal_types.size());
  return ctx;
}

namespace {

double dot(const std::array<double, PropertyTable::kProperties>& w,
           const std::array<double, PropertyTable::kProperties>& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * s[i];
  return acc;
}

double blend(const Agent& agent, LampType type, double personal, const SocialContext& social,
             const SatisfactionParams& params) {
  const double beta = params.experience_weight;
  const double sigma = params.social_scale * agent.preferences[Trait::SocialMindedness];
  const double blended = beta * agent.experience[index_of(type)] + (1.0 - beta) * personal;
  const double total = (1.0 - sigma) * blended + sigma * social.modal_share[index_of(type)];
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace

double personal_satisfaction(const Preferences& prefs, std::size_t model_id,
                             const MarketState& state, const SatisfactionParams& params) {
  state.catalog().at(model_id);
  const PropertyTable table(state, params);
  return std::clamp(dot(personal_weights(prefs, params), table.scores(model_id)), 0.0, 1.0);
}

double satisfaction(const Agent& agent, std::size_t model_id, const MarketState& state,
                    const SocialContext& social, const SatisfactionParams& params) {
  const LampModel& model = state.catalog().at(model_id);
  const double personal = personal_satisfaction(agent.preferences, model_id, state, params);
  return blend(agent, model.type, personal, social, params);
}

void score_models(const Agent& agent, const Catalog& catalog, const PropertyTable& table,
                  const SocialContext& social, const SatisfactionParams& params,
                  std::span<double> out) {
  const auto w = personal_weights(agent.preferences, params);
  for (const auto& m : catalog) {
    const double personal = std::clamp(dot(w, table.scores(m.id)), 0.0, 1.0);
    out[m.id] = blend(agent, m.type, personal, social, params);
  }
}

double peer_distance(const Preferences& a, const Preferences& b, double max_lamps) {
  double d = 0.0;
  for (std::size_t i = 0; i < kTraitCount; ++i) {
    double x = a.values[i];
    double y = b.values[i];
    if (static_cast<Trait>(i) == Trait::LampsNeeded && max_lamps > 0) {
      x /= max_lamps;
      y /= max_lamps;
    }
    d += std::abs(x - y);
  }
  return d;
}

void update_after_replacement(Agent& agent, LampType chosen_type, double realized,
                              double expected, bool repeat_target_unavailable,
                              const LearningParams& params) {
  double& exp = agent.experience[index_of(chosen_type)];
  exp = std::clamp((1.0 - params.experience_rate) * exp + params.experience_rate * realized, 0.0, 1.0);
  double c = agent.certainty;
  if (repeat_target_unavailable) c *= params.unavailable_penalty;
  c = (1.0 - params.certainty_rate) * c +
      params.certainty_rate * (1.0 - std::abs(realized - expected));
  agent.certainty = std::clamp(c, 0.0, 1.0);
}

double draw_lifetime(double mean_lifetime, Rng& rng) {
  std::normal_distribution<double> dist(mean_lifetime, mean_lifetime / 5.0);
  double x = dist(rng);
  while (x < 0.5) x = dist(rng);
  return x;
}

std::vector<Archetype> generate_archetypes(std::size_t count, Rng& rng,
                                           const ArchetypeRanges& ranges) {
  std::vector<Archetype> out(count);
  for (auto& a : out) {
    a[Trait::LampsNeeded] = static_cast<double>(
        std::uniform_int_distribution<int>{ranges.lamps_min, ranges.lamps_max}(rng));
    for (Trait t : {Trait::FunctionalTolerance, Trait::ColourTolerance, Trait::FinancialFocus,
                    Trait::EnvironmentalFocus, Trait::SocialMindedness, Trait::SocialAgreeability}) {
      a[t] = uniform(rng, 0.0, 1.0);
    }
    a[Trait::BaselineIncandescent] =
        uniform(rng, ranges.baseline_incandescent[0], ranges.baseline_incandescent[1]);
    a[Trait::BaselineCfl] = uniform(rng, ranges.baseline_cfl[0], ranges.baseline_cfl[1]);
    a[Trait::BaselineLed] = uniform(rng, ranges.baseline_led[0], ranges.baseline_led[1]);
    a[Trait::Reserved] = uniform(rng, 0.0, 1.0);
  }
  return out;
}

std::string archetypes_to_csv(std::span<const Archetype> archetypes) {
  std::string out;
  for (std::size_t i = 0; i < kTraitCount; ++i) {
    if (i) out += ',';
    out += kTraitColumns[i];
  }
  out += '\n';
  char buf[64];
  for (const auto& a : archetypes) {
    std::snprintf(buf, sizeof buf, "%d", a.lamps_needed());
    out += buf;
    for (std::size_t i = 1; i < kTraitCount; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", a.values[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<Archetype> parse_archetypes_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ConfigError("archetype CSV: missing header");
  const auto& header = rows.front();
  if (header.size() != kTraitCount ||
      !std::equal(header.begin(), header.end(), kTraitColumns.begin())) {
    throw ConfigError("archetype CSV: expected header '" +
                      csv::join(csv::Row(kTraitColumns.begin(), kTraitColumns.end())) + "'");
  }
  std::vector<Archetype> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = "archetype CSV line " + std::to_string(r + 1);
    if (rows[r].size() != kTraitCount) throw ConfigError(where + ": expected 11 fields");
    Archetype a;
    for (std::size_t i = 0; i < kTraitCount; ++i) a.values[i] = csv::to_double(rows[r][i], where);
    if (a[Trait::LampsNeeded] < 1) throw ConfigError(where + ": lamps must be >= 1");
    a[Trait::LampsNeeded] = std::round(a[Trait::LampsNeeded]);
    for (std::size_t i = 1; i < kTraitCount; ++i) {
      if (!(a.values[i] >= 0.0 && a.values[i] <= 1.0)) {
        throw ConfigError(where + ": " + std::string(kTraitColumns[i]) + " must lie in [0,1]");
      }
    }
    out.push_back(a);
  }
  return out;
}

std::vector<Archetype> load_archetypes_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open archetype file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_archetypes_csv(ss.str());
}

Preferences jitter(const Archetype& archetype, Rng& rng) {
  Preferences p;
  for (std::size_t i = 0; i < kTraitCount; ++i) {
    const double v = archetype.values[i];
    double x = v == 0.0 ? 0.0 : uniform(rng, 0.95 * v, 1.05 * v);
    if (static_cast<Trait>(i) == Trait::LampsNeeded) {
      x = std::max(1.0, std::round(x));
    } else {
      x = std::clamp(x, 0.0, 1.0);
    }
    p.values[i] = x;
  }
  return p;
}

std::vector<Agent> instantiate_population(std::span<const Archetype> archetypes, std::size_t n,
                                          const MarketState& initial_market,
                                          const SatisfactionParams& params, Rng& rng) {
  if (archetypes.empty()) throw ConfigError("cannot instantiate agents: no archetypes");
  if (n == 0) throw ConfigError("cannot instantiate agents: population size is zero");
  const Catalog& catalog = initial_market.catalog();
  const PropertyTable table(initial_market, params);

  std::array<bool, kLampTypeCount> stocked{};
  for (const auto& m : catalog) {
    if (m.initially_available) stocked[index_of(m.type)] = true;
  }
  if (std::none_of(stocked.begin(), stocked.end(), [](bool b) { return b; })) {
    throw ConfigError("cannot instantiate agents: catalog has no initially stocked model");
  }

  std::vector<Agent> agents;
  agents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Agent agent;
    agent.id = i;
    agent.archetype = uniform_index(rng, archetypes.size());
    agent.preferences = jitter(archetypes[agent.archetype], rng);
    for (LampType t : kAllLampTypes) agent.experience[index_of(t)] = agent.baseline(t);

    // Preferred model within each stocked type.
    const auto w = personal_weights(agent.preferences, params);
    std::array<std::size_t, kLampTypeCount> favourite{};
    std::array<double, kLampTypeCount> best_score{-1.0, -1.0, -1.0};
    for (const auto& m : catalog) {
      if (!m.initially_available) continue;
      const double s = dot(w, table.scores(m.id));
      if (s > best_score[index_of(m.type)]) {
        best_score[index_of(m.type)] = s;
        favourite[index_of(m.type)] = m.id;
      }
    }

    std::array<double, kLampTypeCount> type_weight{};
    for (LampType t : kAllLampTypes) {
      type_weight[index_of(t)] = stocked[index_of(t)] ? agent.baseline(t) : 0.0;
    }
    if (std::all_of(type_weight.begin(), type_weight.end(), [](double x) { return x <= 0; })) {
      for (LampType t : kAllLampTypes) type_weight[index_of(t)] = stocked[index_of(t)] ? 1.0 : 0.0;
    }
    std::discrete_distribution<std::size_t> pick_type(type_weight.begin(), type_weight.end());

    const int lamps = agent.preferences.lamps_needed();
    agent.inventory.reserve(static_cast<std::size_t>(lamps));
    for (int k = 0; k < lamps; ++k) {
      const std::size_t model = favourite[pick_type(rng)];
      const double life = draw_lifetime(catalog.at(model).mean_lifetime, rng);
      agent.inventory.push_back({model, life * uniform(rng, 0.0, 1.0)});
    }
    const LampType majority = agent.modal_type(catalog);
    agent.certainty = std::clamp(0.5 + 0.5 * agent.baseline(majority), 0.0, 1.0);
    agents.push_back(std::move(agent));
  }
  return agents;
}

}  // namespace lumsim
