#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lumsim/agents.hpp"
#include "lumsim/engine.hpp"

namespace lumsim {

/// Non-incandescent lamps over all lamps. Throws ConfigError for an empty population.
double adoption_share(std::span<const Agent> population, const Catalog& catalog);

struct StrategyShares {
  std::array<double, kStrategyCount> share{};
  bool missing = false;  // no replacement that month; shares are all zero
};

StrategyShares strategy_shares(const StrategyCounts& counts);

/// Per-month ensemble summary.
struct EnsembleStats {
  std::size_t runs = 0;
  std::vector<double> mean_adoption;
  std::vector<double> std_adoption;  // sample standard deviation (n - 1); 0 for one run
  std::vector<std::array<double, kStrategyCount>> mean_strategy_share;  // over non-missing runs
  std::vector<double> final_adoption;                                   // per run
  std::vector<RunFactors> factors;                                      // per run
};

/// Streaming (Welford) aggregation over runs.
EnsembleStats summarize(std::span<const RunResult> runs);

/// Spearman rank correlation with average ranks; nullopt when either side has no variance.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct SensitivityRow {
  std::string factor;
  std::optional<double> rank_correlation;
};

/// Rank correlation of each run factor, and the product of the two pricing factors, with
/// final adoption. Requires at least 10 runs.
std::vector<SensitivityRow> sensitivity_report(std::span<const RunResult> runs);

/// First month in which the cheapest purchasable lamp is not incandescent.
std::optional<int> tipping_point(const RunFactors& factors, const Scenario& scenario,
                                 const Catalog& catalog, int months,
                                 const MarketTrends& trends = {});

/// One scenario's completed ensemble, as handed to the exporters.
struct ScenarioEnsemble {
  std::string scenario;
  std::vector<RunResult> runs;
};

/// Long-format CSV: scenario,run,month,adoption,rep,imi,del,soc.
std::string ensemble_csv(std::span<const ScenarioEnsemble> ensembles);

/// Parses ensemble_csv output back into per-scenario stats (factors are not part of the CSV).
std::vector<std::pair<std::string, EnsembleStats>> stats_from_csv(std::string_view text);

nlohmann::json summary_json(const ScenarioEnsemble& ensemble, const Scenario& scenario,
                            const SimulationConfig& config);
/// Throws ConfigError describing the first schema violation.
void validate_summary_json(const nlohmann::json& summary);

/// Mean adoption with a +/-1 std band per scenario.
std::string adoption_svg(std::span<const std::pair<std::string, EnsembleStats>> series,
                         std::string_view title);
/// Mean share of one behaviour per scenario.
std::string strategy_svg(std::span<const std::pair<std::string, EnsembleStats>> series,
                         Strategy strategy);

/// Writes results.csv, summary_<scenario>.json and the SVG plots into `dir`.
/// I/O failures throw SimulationFault naming the path.
void export_results(std::span<const ScenarioEnsemble> ensembles,
                    std::span<const Scenario> scenarios, const SimulationConfig& config,
                    const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lumsim
