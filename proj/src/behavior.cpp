#include "lumsim/behavior.hpp"

#include <algorithm>

#include "lumsim/errors.hpp"

namespace lumsim {

Strategy select_strategy(double satisfaction, double certainty, const BehaviorThresholds& t) {
  const bool satisfied = satisfaction >= t.satisfaction;
  const bool certain = certainty >= t.certainty;
  if (satisfied) return certain ? Strategy::Repetition : Strategy::Imitation;
  return certain ? Strategy::Deliberation : Strategy::SocialComparison;
}

namespace {

// Strict ordering for "better choice": higher score, then lower price, then lower id.
bool better(std::size_t a, std::size_t b, const MarketState& state, ModelScores scores) {
  if (scores[a] != scores[b]) return scores[a] > scores[b];
  if (state.price(a) != state.price(b)) return state.price(a) < state.price(b);
  return a < b;
}

std::vector<std::size_t> available_subset(std::span<const std::size_t> models,
                                          const MarketState& state) {
  std::vector<std::size_t> out;
  for (std::size_t id : models) {
    if (state.available(id)) out.push_back(id);
  }
  return out;
}

}  // namespace

Purchase deliberation(const MarketState& state, ModelScores scores) {
  const auto& ids = state.available_models();
  if (ids.empty()) {
    throw SimulationFault("no lamp model is available in month " +
                          std::to_string(state.month_index()));
  }
  std::size_t best = ids.front();
  for (std::size_t id : ids) {
    if (better(id, best, state, scores)) best = id;
  }
  return {best, Strategy::Deliberation, scores[best], false};
}

Purchase repetition(std::size_t broken_model, const MarketState& state, ModelScores scores) {
  if (state.available(broken_model)) {
    return {broken_model, Strategy::Repetition, scores[broken_model], false};
  }
  Purchase p = deliberation(state, scores);
  p.repeat_target_unavailable = true;
  return p;
}

std::optional<std::size_t> select_similar_peer(std::size_t self, const PeerView& peers, Rng& rng,
                                               const BehaviorThresholds& t) {
  const std::size_t n = peers.agents.size();
  if (n < 2) return std::nullopt;
  const Preferences& mine = peers.agents[self].preferences;
  double threshold = t.initial_similarity;
  for (int attempt = 0;; ++attempt) {
    // Uniform over the other n - 1 agents.
    std::size_t candidate = uniform_index(rng, n - 1);
    if (candidate >= self) ++candidate;
    if (attempt >= t.max_peer_attempts) return candidate;
    const Preferences& theirs = peers.agents[candidate].preferences;
    const double limit = threshold * (1.0 + mine[Trait::SocialAgreeability]);
    if (peer_distance(mine, theirs, peers.max_lamps) <= limit) return candidate;
    threshold *= t.loosening_factor;
  }
}

Purchase imitation(std::span<const std::size_t> peer_models, const MarketState& state,
                   ModelScores scores, Rng& rng) {
  auto options = available_subset(peer_models, state);
  if (options.empty()) {
    const auto& all = state.available_models();
    if (all.empty()) {
      throw SimulationFault("no lamp model is available in month " +
                            std::to_string(state.month_index()));
    }
    options.assign(all.begin(), all.end());
  }
  const std::size_t id = options[uniform_index(rng, options.size())];
  return {id, Strategy::Imitation, scores[id], false};
}

Purchase social_comparison(std::size_t broken_model, std::span<const std::size_t> peer_models,
                           const MarketState& state, ModelScores scores) {
  const auto options = available_subset(peer_models, state);
  if (options.empty()) return deliberation(state, scores);
  std::size_t best = options.front();
  for (std::size_t id : options) {
    if (better(id, best, state, scores)) best = id;
  }
  if (state.available(broken_model) && scores[best] < scores[broken_model]) {
    best = broken_model;
  }
  return {best, Strategy::SocialComparison, scores[best], false};
}

}  // namespace lumsim
