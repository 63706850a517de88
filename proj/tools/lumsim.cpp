// lumsim: command-line front end for the lighting adoption simulator.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lumsim/config.hpp"
#include "lumsim/errors.hpp"
#include "lumsim/metrics.hpp"

using namespace lumsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFault = 1;
constexpr int kExitUsage = 2;

/// Flags shared by the simulation subcommands. Unset flags fall back to the config file.
struct CommonFlags {
  std::string config;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::size_t agents = 0;
  unsigned jobs = 0;
  std::string out;

  CLI::Option* runs_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* agents_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config, "JSON config file with engine constants")
        ->check(CLI::ExistingFile);
    runs_opt = cmd.add_option("--runs", runs, "Runs per scenario (default 50)")
                   ->check(CLI::PositiveNumber);
    seed_opt = cmd.add_option("--seed", seed, "Master seed (default 42)");
    agents_opt = cmd.add_option("--agents", agents, "Agents per run (default 1000)")
                     ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
    jobs_opt = cmd.add_option("--jobs", jobs, "Worker threads; results do not depend on it")
                   ->check(CLI::PositiveNumber);
    cmd.add_option("--out", out, "Output directory (default $LUMSIM_OUT_DIR or ./lumsim_out)");
  }

  ConfigFile resolve() const {
    ConfigFile file = config.empty() ? ConfigFile{} : load_config_file(config);
    SimulationConfig& c = file.simulation;
    if (runs_opt->count()) c.runs = runs;
    if (seed_opt->count()) c.master_seed = seed;
    if (agents_opt->count()) c.n_agents = agents;
    if (jobs_opt->count()) c.jobs = jobs;
    if (!out.empty()) {
      file.out_dir = out;
    } else if (!file.out_dir) {
      const char* env = std::getenv("LUMSIM_OUT_DIR");
      file.out_dir = env && *env ? env : "lumsim_out";
    }
    c.validate();
    return file;
  }
};

Scenario pick_scenario(const std::string& flag, const ConfigFile& file) {
  if (!flag.empty()) return resolve_scenario(flag);
  if (file.scenario) return *file.scenario;
  throw ConfigError("no scenario given; use --scenario or set 'scenario' in the config file");
}

void print_ranking(const std::vector<ScenarioEnsemble>& ensembles) {
  std::vector<std::pair<double, std::string>> rows;
  for (const auto& e : ensembles) rows.emplace_back(summarize(e.runs).mean_adoption.back(), e.scenario);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::printf("rank  scenario          final mean adoption\n");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::printf("%4zu  %-16s  %.4f\n", i + 1, rows[i].second.c_str(), rows[i].first);
  }
}

void print_sensitivity(const std::vector<RunResult>& runs) {
  std::printf("factor                            spearman rho\n");
  for (const auto& row : sensitivity_report(runs)) {
    if (row.rank_correlation) {
      std::printf("%-32s  %+.4f\n", row.factor.c_str(), *row.rank_correlation);
    } else {
      std::printf("%-32s  undefined\n", row.factor.c_str());
    }
  }
}

int cmd_run(const CommonFlags& flags, const std::string& scenario_flag) {
  const ConfigFile file = flags.resolve();
  const Scenario scenario = pick_scenario(scenario_flag, file);
  const std::vector<ScenarioEnsemble> ensembles{
      {scenario.id, run_ensemble(scenario, file.simulation)}};
  export_results(ensembles, std::vector<Scenario>{scenario}, file.simulation, *file.out_dir);
  const auto stats = summarize(ensembles.front().runs);
  std::printf("%s: %zu runs, December 2025 mean adoption %.4f (std %.4f); outputs in %s\n",
              scenario.id.c_str(), stats.runs, stats.mean_adoption.back(), stats.std_adoption.back(),
              file.out_dir->c_str());
  return kExitOk;
}

int cmd_compare(const CommonFlags& flags, const std::vector<std::string>& ids) {
  if (ids.size() < 2) throw ConfigError("compare needs at least two scenarios");
  const ConfigFile file = flags.resolve();
  std::vector<Scenario> scenarios;
  std::set<std::string> seen;
  for (const auto& id : ids) {
    scenarios.push_back(resolve_scenario(id));
    if (!seen.insert(scenarios.back().id).second) {
      throw ConfigError("duplicate scenario '" + scenarios.back().id + "'");
    }
  }
  std::vector<ScenarioEnsemble> ensembles;
  for (const auto& s : scenarios) ensembles.push_back({s.id, run_ensemble(s, file.simulation)});
  export_results(ensembles, scenarios, file.simulation, *file.out_dir);
  print_ranking(ensembles);
  std::printf("outputs in %s\n", file.out_dir->c_str());
  return kExitOk;
}

int cmd_sensitivity(const CommonFlags& flags, const std::string& scenario_flag) {
  const ConfigFile file = flags.resolve();
  const Scenario scenario = pick_scenario(scenario_flag, file);
  if (file.simulation.runs < 10) throw ConfigError("sensitivity needs --runs of at least 10");
  const std::vector<ScenarioEnsemble> ensembles{
      {scenario.id, run_ensemble(scenario, file.simulation)}};
  export_results(ensembles, std::vector<Scenario>{scenario}, file.simulation, *file.out_dir);
  std::printf("%s, %zu runs, rank correlation with December 2025 adoption\n", scenario.id.c_str(),
              file.simulation.runs);
  print_sensitivity(ensembles.front().runs);
  return kExitOk;
}

int cmd_gen_archetypes(std::size_t count, std::uint64_t seed, const std::string& out) {
  if (count < 1) throw ConfigError("--count must be at least 1");
  Rng rng{seed};
  const auto csv = archetypes_to_csv(generate_archetypes(count, rng));
  if (out.empty() || out == "-") {
    std::fwrite(csv.data(), 1, csv.size(), stdout);
  } else {
    write_text_file(out, csv);
  }
  return kExitOk;
}

int cmd_plot(const std::string& input, const std::string& out) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + input);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto series = stats_from_csv(ss.str());
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw SimulationFault("cannot create output directory " + out + ": " + ec.message());
  const std::filesystem::path dir(out);
  for (const auto& s : series) {
    const std::pair<std::string, EnsembleStats> single[] = {s};
    write_text_file(dir / ("adoption_" + s.first + ".svg"),
                    adoption_svg(single, "Non-incandescent lamps: " + s.first));
  }
  write_text_file(dir / "adoption_all.svg", adoption_svg(series, "Non-incandescent lamps"));
  for (std::size_t k = 0; k < kStrategyCount; ++k) {
    const auto strategy = static_cast<Strategy>(k);
    write_text_file(dir / ("strategy_" + std::string(to_string(strategy)) + ".svg"),
                    strategy_svg(series, strategy));
  }
  std::printf("%zu scenario(s) plotted into %s\n", series.size(), out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Household lighting adoption under EU policy scenarios, 2006-2025"};
  app.require_subcommand(1);

  std::string scenario_flag;
  std::vector<std::string> compare_ids;
  std::size_t count = 87;
  std::uint64_t archetype_seed = 2012;
  std::string archetype_out;
  std::string plot_input;
  std::string plot_out;

  CommonFlags run_flags, compare_flags, sens_flags;
  auto* run = app.add_subcommand("run", "Run one scenario ensemble and export CSV/JSON/SVG");
  run->add_option("--scenario", scenario_flag, "Built-in id or path to a scenario JSON file");
  run_flags.attach(*run);

  auto* compare = app.add_subcommand("compare", "Run several scenarios and rank them by efficacy");
  compare->add_option("--scenarios", compare_ids, "Two or more scenario ids or files")
      ->required()
      ->expected(1, -1);
  compare_flags.attach(*compare);

  auto* sens = app.add_subcommand("sensitivity", "Rank correlation of run factors with adoption");
  sens->add_option("--scenario", scenario_flag, "Built-in id or path to a scenario JSON file");
  sens_flags.attach(*sens);

  auto* gen = app.add_subcommand("gen-archetypes", "Write a synthetic archetype CSV");
  gen->add_option("--count", count, "Number of archetypes")->capture_default_str();
  gen->add_option("--seed", archetype_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", archetype_out, "Output file (stdout if omitted)");

  auto* plot = app.add_subcommand("plot", "Re-render SVG plots from a results.csv");
  plot->add_option("--input", plot_input, "results.csv written by run/compare")->required();
  plot->add_option("--out", plot_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_flags, scenario_flag);
    if (*compare) return cmd_compare(compare_flags, compare_ids);
    if (*sens) return cmd_sensitivity(sens_flags, scenario_flag);
    if (*gen) return cmd_gen_archetypes(count, archetype_seed, archetype_out);
    if (*plot) return cmd_plot(plot_input, plot_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "lumsim: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lumsim: %s\n", e.what());
    return kExitFault;
  }
  return kExitUsage;
}
