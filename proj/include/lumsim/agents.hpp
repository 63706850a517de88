#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lumsim/catalog.hpp"
#include "lumsim/market.hpp"
#include "lumsim/preferences.hpp"
#include "lumsim/rng.hpp"

namespace lumsim {

enum class Strategy { Repetition = 0, Imitation = 1, Deliberation = 2, SocialComparison = 3 };
inline constexpr std::size_t kStrategyCount = 4;
std::string_view to_string(Strategy s);

/// Relative importance of the five lamp properties before agent modulation.
struct PropertyWeights {
  double price = 0.19;
  double efficiency = 0.42;
  double colour = 0.10;
  double ramp_up = 0.82;
  double lifetime = 0.13;

  bool operator==(const PropertyWeights&) const = default;
};

enum class PriceScoring {
  Reference,  // 1 - price / price_reference
  Relative,   // cheapest available price / price
};

struct SatisfactionParams {
  PropertyWeights weights;
  bool include_lifetime = true;
  double experience_weight = 0.075;  // blend of experience vs. current lamp properties
  double social_scale = 0.59;        // social weight = social_scale * social_mindedness
  PriceScoring price_scoring = PriceScoring::Relative;
  double price_reference = 30.0;     // euros
  double ramp_up_cap = 120.0;        // seconds
  double lifetime_cap = 208.0;       // months

  bool operator==(const SatisfactionParams&) const = default;
};

struct LearningParams {
  double experience_rate = 0.30;
  double certainty_rate = 0.20;
  double unavailable_penalty = 0.95;  // certainty multiplier when the repeat target is gone

  bool operator==(const LearningParams&) const = default;
};

/// Ranges for the synthetic archetype generator.
struct ArchetypeRanges {
  int lamps_min = 10;
  int lamps_max = 40;
  std::array<double, 2> baseline_incandescent{0.6, 1.0};
  std::array<double, 2> baseline_cfl{0.2, 0.7};
  std::array<double, 2> baseline_led{0.0, 0.5};
};

struct LampInstance {
  std::size_t model_id = 0;
  double remaining_lifetime = 0.0;  // months

  bool operator==(const LampInstance&) const = default;
};

struct Agent {
  std::size_t id = 0;
  std::size_t archetype = 0;
  Preferences preferences;
  std::vector<LampInstance> inventory;
  std::array<double, kLampTypeCount> experience{};
  double certainty = 0.5;
  Strategy last_strategy = Strategy::Repetition;

  double baseline(LampType type) const;
  /// Most-owned lamp type; ties go to the lower enumerator.
  LampType modal_type(const Catalog& catalog) const;
};

/// Lamp property scores in [0,1] for every catalog model in one month, shared by all agents.
class PropertyTable {
 public:
  static constexpr std::size_t kProperties = 5;  // price, efficiency, colour, ramp-up, lifetime

  PropertyTable(const MarketState& state, const SatisfactionParams& params);

  const std::array<double, kProperties>& scores(std::size_t id) const { return scores_.at(id); }
  std::size_t size() const { return scores_.size(); }

 private:
  std::vector<std::array<double, kProperties>> scores_;
};

/// Agent-modulated property weights, normalized to sum to 1.
std::array<double, PropertyTable::kProperties> personal_weights(const Preferences& prefs,
                                                                const SatisfactionParams& params);

/// Share of a peer sample whose modal owned lamp type is each type.
struct SocialContext {
  std::array<double, kLampTypeCount> modal_share{};

  static SocialContext from_types(std::span<const LampType> peer_modal_types);
};

/// Weighted property score of a model, ignoring experience and peers.
double personal_satisfaction(const Preferences& prefs, std::size_t model_id,
                             const MarketState& state, const SatisfactionParams& params);

/// Full satisfaction: property score blended with experience, then with peer adoption.
double satisfaction(const Agent& agent, std::size_t model_id, const MarketState& state,
                    const SocialContext& social, const SatisfactionParams& params);

/// Scores every catalog model for one agent in one pass. `out` must have catalog size.
void score_models(const Agent& agent, const Catalog& catalog, const PropertyTable& table,
                  const SocialContext& social, const SatisfactionParams& params,
                  std::span<double> out);

/// L1 distance over all eleven traits; lamps_needed is divided by `max_lamps` first.
double peer_distance(const Preferences& a, const Preferences& b, double max_lamps);

/// Experience and certainty update after a purchase. The penalty applies before the blend.
void update_after_replacement(Agent& agent, LampType chosen_type, double realized,
                              double expected, bool repeat_target_unavailable,
                              const LearningParams& params);

/// Lifetime draw from N(mean, mean/5), resampled below 0.5 months.
double draw_lifetime(double mean_lifetime, Rng& rng);

std::vector<Archetype> generate_archetypes(std::size_t count, Rng& rng,
                                           const ArchetypeRanges& ranges = {});
std::string archetypes_to_csv(std::span<const Archetype> archetypes);
std::vector<Archetype> parse_archetypes_csv(std::string_view text);
std::vector<Archetype> load_archetypes_csv(const std::filesystem::path& path);

/// Uniform per-field jitter in (0.95v, 1.05v), clamped to each trait's legal range.
Preferences jitter(const Archetype& archetype, Rng& rng);

/// Builds `n` agents. Initial lamps are drawn per slot among the initially stocked types,
/// with probability proportional to the agent's baseline satisfaction for the type; within a
/// type the agent takes its best-scoring model. Remaining lifetimes start partially used.
std::vector<Agent> instantiate_population(std::span<const Archetype> archetypes, std::size_t n,
                                          const MarketState& initial_market,
                                          const SatisfactionParams& params, Rng& rng);

}  // namespace lumsim
