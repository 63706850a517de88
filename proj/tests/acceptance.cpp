// Acceptance suite: runs the five scenario ensembles at full scale and prints one PASS/FAIL
// line per criterion. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lumsim/behavior.hpp"
#include "lumsim/engine.hpp"
#include "lumsim/metrics.hpp"
#include "oracles.hpp"

using namespace lumsim;

namespace {

constexpr int kBanMonth = (2015 - 2006) * 12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Report {
 public:
  void add(int id, const std::string& name, const Outcome& o) {
    std::printf("%s C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures_ += !o.pass;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Ensembles {
  std::map<std::string, std::vector<RunResult>> runs;
  std::map<std::string, EnsembleStats> stats;

  double final_mean(const std::string& id) const { return stats.at(id).mean_adoption.back(); }
};

Ensembles run_all(const SimulationConfig& config) {
  Ensembles e;
  for (auto id : kBuiltinScenarioIds) {
    const std::string name(id);
    e.runs[name] = run_ensemble(builtin_scenario(id), config);
    e.stats[name] = summarize(e.runs[name]);
  }
  return e;
}

bool ordered(const Ensembles& e) {
  return e.final_mean("hard_ban") == 1.0 && e.final_mean("hard_ban") > e.final_mean("soft_ban_info") &&
         e.final_mean("soft_ban_info") >= e.final_mean("soft_ban") &&
         e.final_mean("soft_ban") > e.final_mean("info_campaign") &&
         e.final_mean("info_campaign") > e.final_mean("no_regulation");
}

std::string finals(const Ensembles& e) {
  return fmt("hard %.3f, soft+info %.3f, soft %.3f, info %.3f, none %.3f", e.final_mean("hard_ban"),
             e.final_mean("soft_ban_info"), e.final_mean("soft_ban"), e.final_mean("info_campaign"),
             e.final_mean("no_regulation"));
}

Outcome ordering(const Ensembles& main, const Ensembles& other, std::uint64_t other_seed) {
  const bool ok = ordered(main) && ordered(other);
  return {ok, finals(main) + fmt("; seed %llu: ", static_cast<unsigned long long>(other_seed)) +
                  (ordered(other) ? "ordering holds" : "ordering broken (" + finals(other) + ")")};
}

Outcome hard_ban_saturation(const Ensembles& e) {
  const int deadline = kBanMonth + 24;
  int latest = -1;
  bool all = true;
  for (const auto& r : e.runs.at("hard_ban")) {
    const auto it = std::find(r.adoption.begin(), r.adoption.end(), 1.0);
    const int month = it == r.adoption.end() ? -1 : static_cast<int>(it - r.adoption.begin());
    if (month < 0 || month > deadline) all = false;
    latest = std::max(latest, month);
  }
  const auto& sd = e.stats.at("hard_ban").std_adoption;
  double max_sd = 0.0;
  for (std::size_t m = static_cast<std::size_t>(deadline); m < sd.size(); ++m) max_sd = std::max(max_sd, sd[m]);
  return {all && max_sd < 0.02,
          fmt("latest run saturates at month %d (deadline %d); max std from deadline on %.4f", latest,
              deadline, max_sd)};
}

Outcome stagnation(const Ensembles& e) {
  const double v = e.final_mean("no_regulation");
  return {v < 0.55, fmt("no_regulation Dec 2025 mean %.3f (< 0.50 + 0.05)", v)};
}

Outcome soft_level(const Ensembles& e) {
  const double v = e.final_mean("soft_ban");
  return {std::abs(v - 0.75) <= 0.10, fmt("soft_ban Dec 2025 mean %.3f (0.75 +/- 0.10)", v)};
}

Outcome info_lift(const Ensembles& e) {
  const double lift = e.final_mean("info_campaign") - e.final_mean("no_regulation");
  return {lift >= 0.10, fmt("info_campaign - no_regulation = %.3f (>= 0.10, paired seeds)", lift)};
}

Outcome sub_additivity(const Ensembles& e) {
  const double combo = e.final_mean("soft_ban_info") - e.final_mean("soft_ban");
  const double lift = e.final_mean("info_campaign") - e.final_mean("no_regulation");
  return {std::abs(combo - 0.05) <= 0.05 && combo < lift,
          fmt("soft_ban_info - soft_ban = %.3f (0.05 +/- 0.05, < info lift %.3f)", combo, lift)};
}

Outcome behaviour(const Ensembles& e) {
  const auto& hard = e.stats.at("hard_ban").mean_strategy_share;
  const auto idx = [](Strategy s) { return static_cast<std::size_t>(s); };
  double trailing = 0.0;
  for (int m = kBanMonth - 12; m < kBanMonth; ++m) trailing += hard[m][idx(Strategy::Deliberation)] / 12;
  const double at_ban = hard[kBanMonth][idx(Strategy::Deliberation)];
  const bool spike = at_ban >= 2.0 * trailing;

  auto social = [&](int from, int to) {
    double s = 0.0;
    for (int m = from; m < to; ++m) {
      s += hard[m][idx(Strategy::Imitation)] + hard[m][idx(Strategy::SocialComparison)];
    }
    return s / (to - from);
  };
  const double pre = social(kBanMonth - 36, kBanMonth);
  const double post = social(kBanMonth + 1, kBanMonth + 37);

  std::array<double, kStrategyCount> total{};
  for (const auto& month : e.stats.at("no_regulation").mean_strategy_share) {
    for (std::size_t k = 0; k < kStrategyCount; ++k) total[k] += month[k];
  }
  const bool repetition_modal =
      std::max_element(total.begin(), total.end()) - total.begin() == idx(Strategy::Repetition);
  return {spike && post > pre && repetition_modal,
          fmt("deliberation %.3f at ban vs trailing mean %.3f (x%.2f); imitation+social %.3f -> %.3f; "
              "no_regulation repetition modal: %s",
              at_ban, trailing, trailing > 0 ? at_ban / trailing : INFINITY, pre, post,
              repetition_modal ? "yes" : "no")};
}

Outcome formula_oracles() {
  const auto catalog = Catalog::standard();
  const Scenario scenarios[] = {builtin_scenario("no_regulation"), builtin_scenario("soft_ban"),
                                builtin_scenario("hard_ban")};
  const oracle::Policy policies[] = {oracle::Policy::None, oracle::Policy::SoftBan,
                                     oracle::Policy::HardBan};
  double worst = 0.0;
  long checks = 0;
  for (int s = 0; s < 3; ++s) {
    for (double a : {0.5, 1.0, 2.0}) {
      for (double b : {0.5, 1.0, 2.0}) {
        for (double c : {0.5, 1.0, 2.0}) {
          for (int year = 2006; year <= 2025; ++year) {
            for (std::size_t i = 0; i < catalog.size(); ++i) {
              const auto& raw = oracle::kTable[i];
              const double p = oracle::price(raw, year, policies[s], a, b);
              const double q = oracle::efficiency(raw, year, c);
              worst = std::max(worst, std::abs(effective_price(catalog.at(i), year, scenarios[s], {a, b, c}) - p) / p);
              worst = std::max(worst, std::abs(effective_efficiency(catalog.at(i), year, {a, b, c}) - q) / q);
              checks += 2;
            }
          }
        }
      }
    }
  }
  Rng rng{derive_run_seed(42, 0)};
  const int n = 100000;
  double mean = 0.0, m2 = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = draw_lifetime(125.0, rng);
    const double d = x - mean;
    mean += d / i;
    m2 += d * (x - mean);
  }
  const double sd = std::sqrt(m2 / (n - 1));
  const bool ok = worst <= 1e-9 && std::abs(mean - 125) <= 1 && std::abs(sd - 25) <= 1;
  return {ok, fmt("%ld formula checks, worst relative error %.2e; lifetime mean %.2f std %.2f", checks,
                  worst, mean, sd)};
}

Outcome determinism(SimulationConfig config) {
  config.runs = 6;
  config.n_agents = 200;
  std::string outputs[3];
  const unsigned jobs[] = {1, 1, 3};
  for (int k = 0; k < 3; ++k) {
    config.jobs = jobs[k];
    std::vector<ScenarioEnsemble> all;
    for (auto id : kBuiltinScenarioIds) {
      all.push_back({std::string(id), run_ensemble(builtin_scenario(id), config)});
    }
    outputs[k] = ensemble_csv(all);
  }
  const bool repeat = outputs[0] == outputs[1];
  const bool threads = outputs[0] == outputs[2];
  return {repeat && threads, fmt("repeat run identical: %s; jobs=3 identical to jobs=1: %s (%zu bytes)",
                                 repeat ? "yes" : "no", threads ? "yes" : "no", outputs[0].size())};
}

Outcome sensitivity(const Ensembles& e) {
  const auto rows = sensitivity_report(e.runs.at("soft_ban"));
  const double led = std::abs(rows[0].rank_correlation.value_or(0));
  const double inc = std::abs(rows[1].rank_correlation.value_or(0));
  const double inn = std::abs(rows[2].rank_correlation.value_or(0));
  return {led > inn && inc > inn,
          fmt("soft_ban |rho| over %zu runs: LED price %.3f, incandescent price %.3f, LED innovation %.3f",
              e.runs.at("soft_ban").size(), led, inc, inn)};
}

Preferences random_preferences(Rng& rng) {
  Preferences p;
  p[Trait::LampsNeeded] = std::uniform_int_distribution<int>{1, 40}(rng);
  for (std::size_t i = 1; i < kTraitCount; ++i) p.values[i] = uniform(rng, 0.0, 1.0);
  return p;
}

Outcome property_suite(const SimulationConfig& base) {
  constexpr int kCases = 10000;
  Rng rng{20240601};
  std::map<std::string, int> violations;

  // Inventory conservation: agent-months across randomized small runs.
  int conservation_cases = 0;
  for (int trial = 0; conservation_cases < kCases; ++trial) {
    SimulationConfig c = base;
    c.n_agents = 5 + uniform_index(rng, 20);
    c.months = 12 + static_cast<int>(uniform_index(rng, 60));
    c.master_seed = rng();
    RunHooks hooks;
    hooks.on_month_end = [&](int, std::span<const Agent> agents, const MarketState&) {
      for (const auto& a : agents) {
        ++conservation_cases;
        violations["conservation"] +=
            a.inventory.size() != static_cast<std::size_t>(a.preferences.lamps_needed());
      }
    };
    const auto id = kBuiltinScenarioIds[uniform_index(rng, kBuiltinScenarioIds.size())];
    run_simulation(builtin_scenario(id), c, static_cast<std::size_t>(trial), hooks);
  }

  // Strategy quadrants on a 0.01 grid plus random thresholds.
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double s = i / 100.0, q = j / 100.0;
      const auto got = select_strategy(s, q, base.thresholds);
      const bool hs = s >= base.thresholds.satisfaction, hc = q >= base.thresholds.certainty;
      const auto want = hs ? (hc ? Strategy::Repetition : Strategy::Imitation)
                           : (hc ? Strategy::Deliberation : Strategy::SocialComparison);
      violations["quadrant"] += got != want;
    }
  }

  const auto catalog = Catalog::standard();
  const Scenario scenarios[] = {builtin_scenario("no_regulation"), builtin_scenario("hard_ban")};
  for (int trial = 0; trial < kCases; ++trial) {
    const MarketState state(catalog, scenarios[trial % 2], RunFactors::draw(rng),
                            static_cast<int>(uniform_index(rng, 240)));
    Agent agent;
    agent.preferences = random_preferences(rng);
    agent.experience = {uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
    const SocialContext social{{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)}};
    SatisfactionParams params = base.satisfaction;
    SatisfactionParams scaled = params;
    const double k = uniform(rng, 0.1, 10);
    auto& w = scaled.weights;
    w = {w.price * k, w.efficiency * k, w.colour * k, w.ramp_up * k, w.lifetime * k};
    std::vector<double> a(catalog.size()), b(catalog.size());
    score_models(agent, catalog, PropertyTable(state, params), social, params, a);
    score_models(agent, catalog, PropertyTable(state, scaled), social, scaled, b);
    for (double x : a) violations["range"] += !(x >= 0.0 && x <= 1.0);
    violations["argmax"] += deliberation(state, a).model_id != deliberation(state, b).model_id;

    const Archetype arch = random_preferences(rng);
    const auto p = jitter(arch, rng);
    for (std::size_t i = 1; i < kTraitCount; ++i) {
      const double v = arch.values[i];
      const bool inside = v == 0.0 ? p.values[i] == 0.0
                                   : p.values[i] >= 0.95 * v && p.values[i] <= std::min(1.0, 1.05 * v);
      violations["jitter"] += !inside;
    }
  }
  int total = 0;
  std::string detail = fmt("%d agent-months, 10201 grid points, %d randomized cases; violations:", conservation_cases, kCases);
  for (const auto& [name, count] : violations) {
    total += count;
    detail += fmt(" %s=%d", name.c_str(), count);
  }
  return {total == 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the lighting adoption model"};
  SimulationConfig config;
  std::uint64_t second_seed = 7;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--runs", config.runs, "Runs per scenario")->check(CLI::Range(10, 100000));
  app.add_option("--agents", config.n_agents, "Agents per run")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.master_seed, "Master seed");
  app.add_option("--second-seed", second_seed, "Seed for the ordering stability check");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  config.jobs = jobs;

  const auto start = std::chrono::steady_clock::now();
  const Ensembles main_run = run_all(config);
  SimulationConfig other = config;
  other.master_seed = second_seed;
  const Ensembles second = run_all(other);

  Report report;
  report.add(1, "scenario ordering", ordering(main_run, second, second_seed));
  report.add(2, "hard ban saturation", hard_ban_saturation(main_run));
  report.add(3, "no-regulation stagnation", stagnation(main_run));
  report.add(4, "soft ban level", soft_level(main_run));
  report.add(5, "information campaign lift", info_lift(main_run));
  report.add(6, "combination sub-additivity", sub_additivity(main_run));
  report.add(7, "behaviour dynamics", behaviour(main_run));
  report.add(8, "formula oracles", formula_oracles());
  report.add(9, "determinism", determinism(config));
  report.add(10, "pricing sensitivity", sensitivity(main_run));
  report.add(11, "property suite", property_suite(config));

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 11 criteria passed (%zu runs x %zu agents, seed %llu, %.1f s)\n",
              11 - report.failures(), config.runs, config.n_agents,
              static_cast<unsigned long long>(config.master_seed), secs);
  return report.failures() == 0 ? 0 : 1;
}
