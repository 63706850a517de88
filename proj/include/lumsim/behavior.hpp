#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lumsim/agents.hpp"
#include "lumsim/market.hpp"
#include "lumsim/rng.hpp"

namespace lumsim {

struct BehaviorThresholds {
  double satisfaction = 0.73;
  double certainty = 0.85;
  double initial_similarity = 1.0;
  double loosening_factor = 1.5;
  int max_peer_attempts = 10;

  bool operator==(const BehaviorThresholds&) const = default;
};

/// Consumat quadrant: satisfied agents repeat or imitate, dissatisfied ones deliberate or
/// compare; certainty picks the individual over the social variant. Ties count as high.
Strategy select_strategy(double satisfaction, double certainty, const BehaviorThresholds& t);

/// Outcome of one replacement decision.
struct Purchase {
  std::size_t model_id = 0;
  Strategy executed = Strategy::Repetition;  // behaviour actually carried out
  double expected_satisfaction = 0.0;
  bool repeat_target_unavailable = false;
};

/// Read-only view of last month's population used by the social behaviours.
struct PeerView {
  std::span<const Agent> agents;
  std::span<const std::vector<std::size_t>> owned_models;  // distinct model ids, ascending
  double max_lamps = 1.0;
};

/// Satisfaction of one agent for every catalog model, indexed by model id.
using ModelScores = std::span<const double>;

/// Best-scoring available model; ties go to the lower price, then the lower id.
/// Throws SimulationFault when nothing is available.
Purchase deliberation(const MarketState& state, ModelScores scores);

/// Rebuys the broken model, or deliberates (flagging the unavailability) if it is gone.
Purchase repetition(std::size_t broken_model, const MarketState& state, ModelScores scores);

/// Draws random other agents until one is within the (loosening) similarity threshold.
/// Returns nullopt if the population has no other agent.
std::optional<std::size_t> select_similar_peer(std::size_t self, const PeerView& peers, Rng& rng,
                                               const BehaviorThresholds& t);

/// Random available model from the peer's inventory, else a random available catalog model.
Purchase imitation(std::span<const std::size_t> peer_models, const MarketState& state,
                   ModelScores scores, Rng& rng);

/// Copies the peer's best available model only if it beats rebuying the broken one.
Purchase social_comparison(std::size_t broken_model, std::span<const std::size_t> peer_models,
                           const MarketState& state, ModelScores scores);

}  // namespace lumsim
