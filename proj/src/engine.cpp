#include "lumsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "lumsim/errors.hpp"
#include "lumsim/metrics.hpp"

namespace lumsim {

void SimulationConfig::validate() const {
  auto fraction = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (n_agents < 2) throw ConfigError("agents must be at least 2");
  if (months < 1) throw ConfigError("months must be at least 1");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (!fraction(thresholds.satisfaction) || !fraction(thresholds.certainty)) {
    throw ConfigError("strategy thresholds must lie in [0,1]");
  }
  if (thresholds.initial_similarity < 0) throw ConfigError("initial similarity must be >= 0");
  if (!(thresholds.loosening_factor > 1.0)) throw ConfigError("loosening factor must exceed 1");
  if (thresholds.max_peer_attempts < 0) throw ConfigError("max peer attempts must be >= 0");
  if (!fraction(satisfaction.experience_weight) || !fraction(satisfaction.social_scale)) {
    throw ConfigError("experience weight and social scale must lie in [0,1]");
  }
  const auto& w = satisfaction.weights;
  if (w.price < 0 || w.efficiency < 0 || w.colour < 0 || w.ramp_up < 0 || w.lifetime < 0) {
    throw ConfigError("property weights must be non-negative");
  }
  if (!(w.price + w.efficiency + w.colour + w.ramp_up + w.lifetime > 0)) {
    throw ConfigError("property weights must not all be zero");
  }
  if (!(satisfaction.price_reference > 0) || !(satisfaction.ramp_up_cap > 0) ||
      !(satisfaction.lifetime_cap > 0)) {
    throw ConfigError("score references must be positive");
  }
  if (!fraction(learning.experience_rate) || !fraction(learning.certainty_rate) ||
      !fraction(learning.unavailable_penalty)) {
    throw ConfigError("learning rates and penalty must lie in [0,1]");
  }
  if (catalog.empty()) throw ConfigError("catalog is empty");
  if (archetypes.empty() && archetype_count == 0) throw ConfigError("archetype count must be >= 1");
}

std::vector<Archetype> SimulationConfig::resolved_archetypes() const {
  if (!archetypes.empty()) return archetypes;
  Rng rng{archetype_seed};
  return generate_archetypes(archetype_count, rng, archetype_ranges);
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::size_t run_index) {
  return combine_seed(master_seed, static_cast<std::uint64_t>(run_index));
}

namespace {

struct PendingFeedback {
  std::size_t agent;
  std::size_t model;
  double expected;
  bool repeat_target_unavailable;
};

class Run {
 public:
  Run(const Scenario& scenario, const SimulationConfig& config,
      std::span<const Archetype> archetypes, std::size_t run_index, const RunHooks& hooks)
      : scenario_(scenario),
        config_(config),
        catalog_(config.catalog),
        hooks_(hooks),
        run_seed_(derive_run_seed(config.master_seed, run_index)),
        lifetime_rng_(make_stream(run_seed_, "lifetimes")),
        peer_rng_(make_stream(run_seed_, "peers")),
        shuffle_rng_(make_stream(run_seed_, "shuffle")),
        social_rng_(make_stream(run_seed_, "social")) {
    result_.run_index = run_index;
    result_.run_seed = run_seed_;
    if (config.factors_override) {
      result_.factors = *config.factors_override;
    } else {
      Rng factor_rng = make_stream(run_seed_, "factors");
      result_.factors = RunFactors::draw(factor_rng);
    }
    const MarketState initial(catalog_, scenario_, result_.factors, 0, config.trends);
    Rng population_rng = make_stream(run_seed_, "population");
    agents_ = instantiate_population(archetypes, config.n_agents, initial, config.satisfaction,
                                     population_rng);
    for (const Agent& a : agents_) {
      max_lamps_ = std::max(max_lamps_, a.preferences[Trait::LampsNeeded]);
    }
    order_.resize(agents_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    owned_.resize(agents_.size());
    modal_.resize(agents_.size());
    scores_.resize(catalog_.size());
  }

  RunResult execute() {
    result_.adoption.reserve(static_cast<std::size_t>(config_.months));
    result_.strategy_counts.reserve(static_cast<std::size_t>(config_.months));
    for (int month = 0; month < config_.months; ++month) step(month);
    return std::move(result_);
  }

 private:
  void step(int month) {
    const MarketState state(catalog_, scenario_, result_.factors, month, config_.trends);
    const PropertyTable table(state, config_.satisfaction);

    if (month % 12 == 0) {
      for (const auto& p : scenario_.preferences) {
        if (p.year == state.year()) apply_preference_intervention(agents_, p);
      }
    }

    apply_feedback(table);
    take_snapshot();

    for (Agent& a : agents_) {
      for (LampInstance& lamp : a.inventory) lamp.remaining_lifetime -= 1.0;
    }

    std::shuffle(order_.begin(), order_.end(), shuffle_rng_);
    StrategyCounts counts{};
    const PeerView peers{agents_, owned_, max_lamps_};
    for (std::size_t idx : order_) {
      Agent& agent = agents_[idx];
      const bool any_broken =
          std::any_of(agent.inventory.begin(), agent.inventory.end(),
                      [](const LampInstance& l) { return l.remaining_lifetime <= 0.0; });
      if (!any_broken) continue;

      const SocialContext social = sample_social_context(idx);
      score_models(agent, catalog_, table, social, config_.satisfaction, scores_);

      for (LampInstance& lamp : agent.inventory) {
        if (lamp.remaining_lifetime > 0.0) continue;
        const double current = mean_inventory_score(agent);
        const Strategy selected =
            select_strategy(current, agent.certainty, config_.thresholds);
        const Purchase purchase = decide(idx, lamp.model_id, selected, state, peers);
        if (!state.available(purchase.model_id)) {
          throw SimulationFault("behaviour chose an unavailable model");
        }
        if (hooks_.on_purchase) {
          hooks_.on_purchase({month, idx, lamp.model_id, selected, purchase});
        }
        lamp.model_id = purchase.model_id;
        lamp.remaining_lifetime =
            draw_lifetime(catalog_.at(purchase.model_id).mean_lifetime, lifetime_rng_);
        agent.last_strategy = purchase.executed;
        ++counts[static_cast<std::size_t>(purchase.executed)];
        pending_.push_back({idx, purchase.model_id, purchase.expected_satisfaction,
                            purchase.repeat_target_unavailable});
      }
    }

    result_.adoption.push_back(adoption_share(agents_, catalog_));
    result_.strategy_counts.push_back(counts);
    if (hooks_.on_month_end) hooks_.on_month_end(month, agents_, state);
  }

  Purchase decide(std::size_t idx, std::size_t broken, Strategy selected,
                  const MarketState& state, const PeerView& peers) {
    switch (selected) {
      case Strategy::Repetition:
        return repetition(broken, state, scores_);
      case Strategy::Deliberation:
        return deliberation(state, scores_);
      case Strategy::Imitation:
      case Strategy::SocialComparison: {
        const auto peer = select_similar_peer(idx, peers, peer_rng_, config_.thresholds);
        if (!peer) return deliberation(state, scores_);
        if (selected == Strategy::Imitation) {
          return imitation(owned_[*peer], state, scores_, peer_rng_);
        }
        return social_comparison(broken, owned_[*peer], state, scores_);
      }
    }
    return deliberation(state, scores_);
  }

  // Realized satisfaction is the lamp's property score under this month's market.
  void apply_feedback(const PropertyTable& table) {
    for (const auto& fb : pending_) {
      Agent& agent = agents_[fb.agent];
      const auto w = personal_weights(agent.preferences, config_.satisfaction);
      const auto& s = table.scores(fb.model);
      double realized = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) realized += w[i] * s[i];
      realized = std::clamp(realized, 0.0, 1.0);
      update_after_replacement(agent, catalog_.at(fb.model).type, realized, fb.expected,
                               fb.repeat_target_unavailable, config_.learning);
    }
    pending_.clear();
  }

  void take_snapshot() {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      auto& models = owned_[i];
      models.clear();
      for (const auto& lamp : agents_[i].inventory) models.push_back(lamp.model_id);
      std::sort(models.begin(), models.end());
      models.erase(std::unique(models.begin(), models.end()), models.end());
      modal_[i] = agents_[i].modal_type(catalog_);
    }
  }

  SocialContext sample_social_context(std::size_t self) {
    const std::size_t n = agents_.size();
    sample_.clear();
    for (std::size_t k = 0; k < config_.social_sample_size; ++k) {
      std::size_t other = uniform_index(social_rng_, n - 1);
      if (other >= self) ++other;
      sample_.push_back(modal_[other]);
    }
    return SocialContext::from_types(sample_);
  }

  double mean_inventory_score(const Agent& agent) const {
    double total = 0.0;
    for (const auto& lamp : agent.inventory) total += scores_[lamp.model_id];
    return total / static_cast<double>(agent.inventory.size());
  }

  const Scenario& scenario_;
  const SimulationConfig& config_;
  const Catalog& catalog_;
  const RunHooks& hooks_;
  std::uint64_t run_seed_;
  Rng lifetime_rng_;
  Rng peer_rng_;
  Rng shuffle_rng_;
  Rng social_rng_;
  RunResult result_;
  std::vector<Agent> agents_;
  double max_lamps_ = 1.0;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> owned_;
  std::vector<LampType> modal_;
  std::vector<LampType> sample_;
  std::vector<double> scores_;
  std::vector<PendingFeedback> pending_;
};

}  // namespace

RunResult run_simulation(const Scenario& scenario, const SimulationConfig& config,
                         std::span<const Archetype> archetypes, std::size_t run_index,
                         const RunHooks& hooks) {
  config.validate();
  Run run(scenario, config, archetypes, run_index, hooks);
  return run.execute();
}

RunResult run_simulation(const Scenario& scenario, const SimulationConfig& config,
                         std::size_t run_index, const RunHooks& hooks) {
  const auto archetypes = config.resolved_archetypes();
  return run_simulation(scenario, config, archetypes, run_index, hooks);
}

std::vector<RunResult> run_ensemble(const Scenario& scenario, const SimulationConfig& config) {
  config.validate();
  const auto archetypes = config.resolved_archetypes();
  std::vector<RunResult> results(config.runs);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t failed_run = 0;

  auto worker = [&] {
    for (std::size_t i = next++; i < config.runs; i = next++) {
      try {
        results[i] = run_simulation(scenario, config, archetypes, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error || i < failed_run) {
          first_error = std::current_exception();
          failed_run = i;
        }
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, config.runs));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationFault("run " + std::to_string(failed_run) + " (scenario " + scenario.id +
                            "): " + e.what());
    }
  }
  return results;
}

}  // namespace lumsim
