#include "lumsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "lumsim/config.hpp"
#include "lumsim/csv.hpp"
#include "lumsim/errors.hpp"

namespace lumsim {

using nlohmann::json;

double adoption_share(std::span<const Agent> population, const Catalog& catalog) {
  std::size_t total = 0;
  std::size_t efficient = 0;
  for (const Agent& a : population) {
    for (const auto& lamp : a.inventory) {
      ++total;
      if (catalog.at(lamp.model_id).type != LampType::Incandescent) ++efficient;
    }
  }
  if (total == 0) throw ConfigError("adoption share of an empty population is undefined");
  return static_cast<double>(efficient) / static_cast<double>(total);
}

StrategyShares strategy_shares(const StrategyCounts& counts) {
  StrategyShares out;
  const int total = std::accumulate(counts.begin(), counts.end(), 0);
  if (total == 0) {
    out.missing = true;
    return out;
  }
  for (std::size_t i = 0; i < kStrategyCount; ++i) {
    out.share[i] = static_cast<double>(counts[i]) / total;
  }
  return out;
}

namespace {

struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stddev() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0; }
};

struct MonthAccumulator {
  std::vector<Welford> adoption;
  std::vector<std::array<double, kStrategyCount>> share_sum;
  std::vector<std::size_t> share_n;

  explicit MonthAccumulator(std::size_t months)
      : adoption(months), share_sum(months), share_n(months, 0) {}

  void add(std::size_t month, double adoption_value, const StrategyShares& shares) {
    adoption[month].add(adoption_value);
    if (shares.missing) return;
    for (std::size_t s = 0; s < kStrategyCount; ++s) share_sum[month][s] += shares.share[s];
    ++share_n[month];
  }

  void finish(EnsembleStats& out) const {
    const std::size_t months = adoption.size();
    out.mean_adoption.resize(months);
    out.std_adoption.resize(months);
    out.mean_strategy_share.resize(months);
    for (std::size_t m = 0; m < months; ++m) {
      out.mean_adoption[m] = adoption[m].mean;
      out.std_adoption[m] = adoption[m].stddev();
      for (std::size_t s = 0; s < kStrategyCount; ++s) {
        out.mean_strategy_share[m][s] =
            share_n[m] ? share_sum[m][s] / static_cast<double>(share_n[m]) : 0.0;
      }
    }
  }
};

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

EnsembleStats summarize(std::span<const RunResult> runs) {
  EnsembleStats out;
  out.runs = runs.size();
  if (runs.empty()) return out;
  const std::size_t months = runs.front().adoption.size();
  MonthAccumulator acc(months);
  for (const auto& r : runs) {
    if (r.adoption.size() != months || r.strategy_counts.size() != months) {
      throw ConfigError("cannot summarize runs of different lengths");
    }
    for (std::size_t m = 0; m < months; ++m) {
      acc.add(m, r.adoption[m], strategy_shares(r.strategy_counts[m]));
    }
    out.final_adoption.push_back(r.adoption.empty() ? 0.0 : r.adoption.back());
    out.factors.push_back(r.factors);
  }
  acc.finish(out);
  return out;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<SensitivityRow> sensitivity_report(std::span<const RunResult> runs) {
  if (runs.size() < 10) {
    throw ConfigError("sensitivity analysis needs at least 10 runs, got " +
                      std::to_string(runs.size()));
  }
  std::vector<double> outcome, led_price, inc_price, innovation, pricing;
  for (const auto& r : runs) {
    outcome.push_back(r.adoption.empty() ? 0.0 : r.adoption.back());
    led_price.push_back(r.factors.led_price);
    inc_price.push_back(r.factors.incandescent_price);
    innovation.push_back(r.factors.led_innovation);
    pricing.push_back(r.factors.led_price * r.factors.incandescent_price);
  }
  return {
      {"led_price_factor", spearman(led_price, outcome)},
      {"incandescent_price_factor", spearman(inc_price, outcome)},
      {"led_innovation_factor", spearman(innovation, outcome)},
      {"led_price_x_incandescent_price", spearman(pricing, outcome)},
  };
}

std::optional<int> tipping_point(const RunFactors& factors, const Scenario& scenario,
                                 const Catalog& catalog, int months, const MarketTrends& trends) {
  for (int month = 0; month < months; month += 12) {
    const MarketState state(catalog, scenario, factors, month, trends);
    double cheapest_incandescent = INFINITY;
    double cheapest_other = INFINITY;
    for (std::size_t id : state.available_models()) {
      double& slot = catalog.at(id).type == LampType::Incandescent ? cheapest_incandescent
                                                                   : cheapest_other;
      slot = std::min(slot, state.price(id));
    }
    if (std::isfinite(cheapest_other) && cheapest_other <= cheapest_incandescent) return month;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------- CSV

std::string ensemble_csv(std::span<const ScenarioEnsemble> ensembles) {
  std::string out = "scenario,run,month,adoption,rep,imi,del,soc\n";
  char buf[256];
  for (const auto& e : ensembles) {
    for (const auto& r : e.runs) {
      for (std::size_t m = 0; m < r.adoption.size(); ++m) {
        const auto s = strategy_shares(r.strategy_counts[m]);
        std::snprintf(buf, sizeof buf, ",%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.run_index, m,
                      r.adoption[m], s.share[0], s.share[1], s.share[2], s.share[3]);
        out += e.scenario;
        out += buf;
      }
    }
  }
  return out;
}

std::vector<std::pair<std::string, EnsembleStats>> stats_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || csv::join(rows.front()) != "scenario,run,month,adoption,rep,imi,del,soc") {
    throw ConfigError("results CSV: unexpected header");
  }
  struct Series {
    std::map<long long, std::vector<std::pair<double, StrategyShares>>> runs;
  };
  std::vector<std::string> order;
  std::map<std::string, Series> by_scenario;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "results CSV line " + std::to_string(i + 1);
    if (row.size() != 8) throw ConfigError(where + ": expected 8 fields");
    if (!by_scenario.contains(row[0])) order.push_back(row[0]);
    auto& run = by_scenario[row[0]].runs[csv::to_int(row[1], where)];
    const auto month = csv::to_int(row[2], where);
    if (month != static_cast<long long>(run.size())) throw ConfigError(where + ": months out of order");
    StrategyShares s;
    for (std::size_t k = 0; k < kStrategyCount; ++k) s.share[k] = csv::to_double(row[4 + k], where);
    s.missing = std::all_of(s.share.begin(), s.share.end(), [](double x) { return x == 0.0; });
    run.emplace_back(csv::to_double(row[3], where), s);
  }
  std::vector<std::pair<std::string, EnsembleStats>> out;
  for (const auto& name : order) {
    const auto& series = by_scenario[name];
    const std::size_t months = series.runs.begin()->second.size();
    EnsembleStats stats;
    stats.runs = series.runs.size();
    MonthAccumulator acc(months);
    for (const auto& [run_index, points] : series.runs) {
      if (points.size() != months) throw ConfigError("results CSV: runs of different lengths");
      for (std::size_t m = 0; m < months; ++m) acc.add(m, points[m].first, points[m].second);
      stats.final_adoption.push_back(points.back().first);
    }
    acc.finish(stats);
    out.emplace_back(name, std::move(stats));
  }
  return out;
}

// ---------------------------------------------------------------------------- JSON

json summary_json(const ScenarioEnsemble& ensemble, const Scenario& scenario,
                  const SimulationConfig& config) {
  const EnsembleStats stats = summarize(ensemble.runs);
  json runs = json::array();
  for (const auto& r : ensemble.runs) {
    const auto tip = tipping_point(r.factors, scenario, config.catalog,
                                   static_cast<int>(r.adoption.size()), config.trends);
    runs.push_back({{"run", r.run_index},
                    {"seed", r.run_seed},
                    {"final_adoption", r.adoption.empty() ? 0.0 : r.adoption.back()},
                    {"tipping_month", tip ? json(*tip) : json(nullptr)},
                    {"factors",
                     {{"led_price", r.factors.led_price},
                      {"incandescent_price", r.factors.incandescent_price},
                      {"led_innovation", r.factors.led_innovation}}}});
  }
  json shares = json::object();
  for (std::size_t s = 0; s < kStrategyCount; ++s) {
    json series = json::array();
    for (const auto& m : stats.mean_strategy_share) series.push_back(m[s]);
    shares[std::string(to_string(static_cast<Strategy>(s)))] = series;
  }
  json sensitivity = json::array();
  if (ensemble.runs.size() >= 10) {
    for (const auto& row : sensitivity_report(ensemble.runs)) {
      sensitivity.push_back(
          {{"factor", row.factor},
           {"rank_correlation",
            row.rank_correlation ? json(*row.rank_correlation) : json(nullptr)}});
    }
  }
  return {{"scenario", ensemble.scenario},
          {"definition", json::parse(serialize_scenario(scenario))},
          {"runs", ensemble.runs.size()},
          {"months", stats.mean_adoption.size()},
          {"start", "2006-01"},
          {"mean_adoption", stats.mean_adoption},
          {"std_adoption", stats.std_adoption},
          {"mean_strategy_share", shares},
          {"per_run", runs},
          {"sensitivity", sensitivity},
          {"catalog_models", config.catalog.size()},
          {"config", config_to_json(config)}};
}

void validate_summary_json(const json& s) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("summary JSON: " + what);
  };
  require(s.is_object(), "expected an object");
  for (const char* key : {"scenario", "definition", "runs", "months", "start", "mean_adoption",
                          "std_adoption", "mean_strategy_share", "per_run", "sensitivity",
                          "catalog_models", "config"}) {
    require(s.contains(key), std::string("missing '") + key + "'");
  }
  require(s["scenario"].is_string(), "scenario must be a string");
  parse_scenario_json(s["definition"].dump());
  require(s["runs"].is_number_unsigned() && s["runs"].get<std::size_t>() >= 1, "runs must be >= 1");
  const auto months = s["months"].get<std::size_t>();
  for (const char* key : {"mean_adoption", "std_adoption"}) {
    require(s[key].is_array() && s[key].size() == months, std::string(key) + " length != months");
    for (const auto& v : s[key]) {
      require(v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 1.0,
              std::string(key) + " values must lie in [0,1]");
    }
  }
  require(s["mean_strategy_share"].is_object() && s["mean_strategy_share"].size() == kStrategyCount,
          "mean_strategy_share needs four behaviours");
  for (std::size_t k = 0; k < kStrategyCount; ++k) {
    const std::string name(to_string(static_cast<Strategy>(k)));
    require(s["mean_strategy_share"].contains(name), "missing behaviour " + name);
    require(s["mean_strategy_share"][name].size() == months, name + " length != months");
  }
  require(s["per_run"].is_array() && s["per_run"].size() == s["runs"].get<std::size_t>(),
          "per_run length != runs");
  for (const auto& r : s["per_run"]) {
    require(r.contains("final_adoption") && r.contains("factors") && r.contains("tipping_month") &&
                r.contains("run") && r.contains("seed"),
            "per_run entry incomplete");
    for (const char* f : {"led_price", "incandescent_price", "led_innovation"}) {
      const double v = r["factors"].at(f).get<double>();
      require(v >= 0.5 && v <= 2.0, std::string("factor ") + f + " outside [0.5, 2]");
    }
  }
  require(s["sensitivity"].is_array(), "sensitivity must be an array");
  parse_config_json(s["config"].dump());
}

// ---------------------------------------------------------------------------- SVG

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

class Plot {
 public:
  Plot(std::size_t months, std::string_view title, std::string_view y_label)
      : months_(std::max<std::size_t>(months, 2)) {
    char buf[512];
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"480\" "
            "viewBox=\"0 0 860 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out_ += "<rect width=\"860\" height=\"480\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">%.*s</text>\n",
                  kLeft + kWidth / 2, static_cast<int>(title.size()), title.data());
    out_ += buf;
    for (int pct = 0; pct <= 100; pct += 20) {
      const double y = ypos(pct / 100.0);
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"#ddd\"/>"
                    "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\">%d%%</text>\n",
                    kLeft, y, kLeft + kWidth, y, kLeft - 6, y + 4, pct);
      out_ += buf;
    }
    for (std::size_t m = 0; m < months_; m += 24) {
      const double x = xpos(static_cast<double>(m));
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"#999\"/>"
                    "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%zu</text>\n",
                    x, kTop + kHeight, x, kTop + kHeight + 5, x, kTop + kHeight + 20,
                    static_cast<std::size_t>(kStartYear) + m / 12);
      out_ += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"#333\"/>\n"
                  "<text x=\"16\" y=\"%d\" transform=\"rotate(-90 16 %d)\" "
                  "text-anchor=\"middle\">%.*s</text>\n",
                  kLeft, kTop, kWidth, kHeight, kTop + kHeight / 2, kTop + kHeight / 2,
                  static_cast<int>(y_label.size()), y_label.data());
    out_ += buf;
  }

  void band(std::span<const double> lo, std::span<const double> hi, const char* colour) {
    std::string pts;
    for (std::size_t m = 0; m < lo.size(); ++m) pts += point(m, std::clamp(hi[m], 0.0, 1.0));
    for (std::size_t m = lo.size(); m-- > 0;) pts += point(m, std::clamp(lo[m], 0.0, 1.0));
    out_ += "<polygon points=\"" + pts + "\" fill=\"" + colour + "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
  }

  void line(std::span<const double> ys, const char* colour) {
    std::string pts;
    for (std::size_t m = 0; m < ys.size(); ++m) pts += point(m, ys[m]);
    out_ += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colour +
            "\" stroke-width=\"2\"/>\n";
  }

  void legend(std::size_t slot, std::string_view label, const char* colour) {
    char buf[512];
    const int y = kTop + 14 + static_cast<int>(slot) * 18;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"%s\" stroke-width=\"3\"/>"
                  "<text x=\"%d\" y=\"%d\">%.*s</text>\n",
                  kLeft + kWidth + 12, y - 4, kLeft + kWidth + 34, y - 4, colour,
                  kLeft + kWidth + 40, y, static_cast<int>(label.size()), label.data());
    out_ += buf;
  }

  std::string finish() { return out_ + "</svg>\n"; }

 private:
  static constexpr int kLeft = 60, kTop = 40, kWidth = 620, kHeight = 380;

  double xpos(double month) const {
    return kLeft + kWidth * month / static_cast<double>(months_ - 1);
  }
  double ypos(double share) const { return kTop + kHeight * (1.0 - share); }
  std::string point(std::size_t m, double share) const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f,%.1f ", xpos(static_cast<double>(m)), ypos(share));
    return buf;
  }

  std::size_t months_;
  std::string out_;
};

// Legend ordered by final mean adoption, most effective first.
std::vector<std::size_t> by_efficacy(std::span<const std::pair<std::string, EnsembleStats>> series) {
  std::vector<std::size_t> idx(series.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& ma = series[a].second.mean_adoption;
    const auto& mb = series[b].second.mean_adoption;
    return (ma.empty() ? 0 : ma.back()) > (mb.empty() ? 0 : mb.back());
  });
  return idx;
}

}  // namespace

std::string adoption_svg(std::span<const std::pair<std::string, EnsembleStats>> series,
                         std::string_view title) {
  const std::size_t months = series.empty() ? 2 : series.front().second.mean_adoption.size();
  Plot plot(months, title, "non-incandescent lamps");
  const auto order = by_efficacy(series);
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const auto& [name, stats] = series[order[slot]];
    const char* colour = kPalette[order[slot] % kPalette.size()];
    std::vector<double> lo(stats.mean_adoption.size()), hi(lo.size());
    for (std::size_t m = 0; m < lo.size(); ++m) {
      lo[m] = stats.mean_adoption[m] - stats.std_adoption[m];
      hi[m] = stats.mean_adoption[m] + stats.std_adoption[m];
    }
    plot.band(lo, hi, colour);
    plot.line(stats.mean_adoption, colour);
    plot.legend(slot, name, colour);
  }
  return plot.finish();
}

std::string strategy_svg(std::span<const std::pair<std::string, EnsembleStats>> series,
                         Strategy strategy) {
  const std::size_t months = series.empty() ? 2 : series.front().second.mean_adoption.size();
  const std::string title = "Share of " + std::string(to_string(strategy)) + " behaviour";
  Plot plot(months, title, "share of replacements");
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& [name, stats] = series[i];
    std::vector<double> ys;
    for (const auto& m : stats.mean_strategy_share) ys.push_back(m[static_cast<std::size_t>(strategy)]);
    plot.line(ys, kPalette[i % kPalette.size()]);
    plot.legend(i, name, kPalette[i % kPalette.size()]);
  }
  return plot.finish();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimulationFault("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw SimulationFault("write failed for " + path.string());
}

void export_results(std::span<const ScenarioEnsemble> ensembles,
                    std::span<const Scenario> scenarios, const SimulationConfig& config,
                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimulationFault("cannot create output directory " + dir.string() + ": " + ec.message());

  write_text_file(dir / "results.csv", ensemble_csv(ensembles));
  std::vector<std::pair<std::string, EnsembleStats>> series;
  for (std::size_t i = 0; i < ensembles.size(); ++i) {
    const auto& e = ensembles[i];
    write_text_file(dir / ("summary_" + e.scenario + ".json"),
                    summary_json(e, scenarios[i], config).dump(2) + "\n");
    series.emplace_back(e.scenario, summarize(e.runs));
    const std::pair<std::string, EnsembleStats> single[] = {series.back()};
    write_text_file(dir / ("adoption_" + e.scenario + ".svg"),
                    adoption_svg(single, "Non-incandescent lamps: " + e.scenario));
  }
  if (ensembles.size() > 1) {
    write_text_file(dir / "adoption_all.svg", adoption_svg(series, "Non-incandescent lamps"));
  }
  for (std::size_t s = 0; s < kStrategyCount; ++s) {
    const auto strategy = static_cast<Strategy>(s);
    write_text_file(dir / ("strategy_" + std::string(to_string(strategy)) + ".svg"),
                    strategy_svg(series, strategy));
  }
}

}  // namespace lumsim
