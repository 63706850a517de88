#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lumsim/agents.hpp"
#include "lumsim/behavior.hpp"
#include "lumsim/catalog.hpp"
#include "lumsim/market.hpp"
#include "lumsim/scenario.hpp"

namespace lumsim {

inline constexpr int kDefaultMonths = 240;  // January 2006 .. December 2025

struct SimulationConfig {
  std::size_t n_agents = 1000;
  int months = kDefaultMonths;
  std::size_t runs = 50;
  std::uint64_t master_seed = 42;
  unsigned jobs = 1;

  BehaviorThresholds thresholds;
  SatisfactionParams satisfaction;
  LearningParams learning;
  MarketTrends trends;
  std::size_t social_sample_size = 10;

  Catalog catalog = Catalog::standard();
  /// Empty means: generate `archetype_count` synthetic archetypes from `archetype_seed`.
  std::vector<Archetype> archetypes;
  std::size_t archetype_count = 87;
  std::uint64_t archetype_seed = 2012;
  ArchetypeRanges archetype_ranges;

  /// Pins the per-run factors instead of drawing them (for controlled experiments).
  std::optional<RunFactors> factors_override;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// The configured archetypes, or the generated default set.
  std::vector<Archetype> resolved_archetypes() const;
};

using StrategyCounts = std::array<int, kStrategyCount>;

struct RunResult {
  std::size_t run_index = 0;
  std::uint64_t run_seed = 0;
  RunFactors factors;
  std::vector<double> adoption;                // non-incandescent share at each month end
  std::vector<StrategyCounts> strategy_counts;  // executed behaviours per month

  bool operator==(const RunResult&) const = default;
};

struct PurchaseEvent {
  int month = 0;
  std::size_t agent = 0;
  std::size_t broken_model = 0;
  Strategy selected = Strategy::Repetition;
  Purchase purchase;
};

/// Optional observers for tests and diagnostics.
struct RunHooks {
  std::function<void(const PurchaseEvent&)> on_purchase;
  std::function<void(int month, std::span<const Agent>, const MarketState&)> on_month_end;
};

/// Seeds are shared across scenarios so that scenario comparisons are paired.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::size_t run_index);

RunResult run_simulation(const Scenario& scenario, const SimulationConfig& config,
                         std::size_t run_index, const RunHooks& hooks = {});

/// As above with archetypes already resolved (avoids regenerating them per run).
RunResult run_simulation(const Scenario& scenario, const SimulationConfig& config,
                         std::span<const Archetype> archetypes, std::size_t run_index,
                         const RunHooks& hooks = {});

/// `config.runs` independent runs on `config.jobs` threads, ordered by run index.
std::vector<RunResult> run_ensemble(const Scenario& scenario, const SimulationConfig& config);

}  // namespace lumsim
