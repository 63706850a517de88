#pragma once

#include <cstddef>
#include <vector>

#include "lumsim/catalog.hpp"
#include "lumsim/rng.hpp"
#include "lumsim/scenario.hpp"

namespace lumsim {

inline constexpr int kStartYear = 2006;

/// Per-run multipliers on the progression rates, each uniform on [0.5, 2].
struct RunFactors {
  double led_price = 1.0;
  double incandescent_price = 1.0;
  double led_innovation = 1.0;

  static RunFactors draw(Rng& rng);
  /// Factor that scales a scheduled price change for the given lamp type.
  double price_factor(LampType type) const;

  bool operator==(const RunFactors&) const = default;
};

/// Scenario-independent LED progression. Changes apply each January.
struct MarketTrends {
  int led_introduction_year = 2006;
  double led_price_decline = 0.10;   // per year, before the run factor
  int led_price_steps = 13;          // 2007..2019; 2020 prices hold afterwards
  double led_efficiency_growth = 0.05;
  int led_efficiency_steps = 14;     // 2007..2020
  double efficiency_cap = 0.99;
};

double effective_price(const LampModel& model, int year, const Scenario& scenario,
                       const RunFactors& factors, const MarketTrends& trends = {});

double effective_efficiency(const LampModel& model, int year, const RunFactors& factors,
                            const MarketTrends& trends = {});

bool is_available(const LampModel& model, int year, const Scenario& scenario,
                  const MarketTrends& trends = {});

/// Market conditions for one month. Immutable after construction.
class MarketState {
 public:
  MarketState(const Catalog& catalog, const Scenario& scenario, const RunFactors& factors,
              int month_index, const MarketTrends& trends = {});

  int month_index() const { return month_; }
  int year() const { return kStartYear + month_ / 12; }
  const Catalog& catalog() const { return *catalog_; }

  double price(std::size_t id) const { return price_.at(id); }
  double efficiency(std::size_t id) const { return efficiency_.at(id); }
  bool available(std::size_t id) const { return available_.at(id) != 0; }

  /// Ids of purchasable models, ascending.
  const std::vector<std::size_t>& available_models() const { return available_ids_; }

 private:
  const Catalog* catalog_;
  int month_;
  std::vector<double> price_;
  std::vector<double> efficiency_;
  std::vector<char> available_;
  std::vector<std::size_t> available_ids_;
};

}  // namespace lumsim
