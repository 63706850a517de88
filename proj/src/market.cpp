#include "lumsim/market.hpp"

#include <algorithm>
#include <cmath>

namespace lumsim {

namespace {

// Number of Januaries in [first, last] that have occurred by `year`.
int elapsed_steps(int year, int first, int last) {
  if (year < first) return 0;
  return std::min(year, last) - first + 1;
}

}  // namespace

RunFactors RunFactors::draw(Rng& rng) {
  RunFactors f;
  f.led_price = uniform(rng, 0.5, 2.0);
  f.incandescent_price = uniform(rng, 0.5, 2.0);
  f.led_innovation = uniform(rng, 0.5, 2.0);
  return f;
}

double RunFactors::price_factor(LampType type) const {
  switch (type) {
    case LampType::LED:
      return led_price;
    case LampType::Incandescent:
      return incandescent_price;
    case LampType::CFL:
      break;
  }
  return 1.0;
}

double effective_price(const LampModel& model, int year, const Scenario& scenario,
                       const RunFactors& factors, const MarketTrends& trends) {
  double price = model.base_price;
  if (model.type == LampType::LED) {
    const int k = std::clamp(year - trends.led_introduction_year, 0, trends.led_price_steps);
    price *= std::pow(1.0 - trends.led_price_decline * factors.led_price, k);
  }
  for (const auto& p : scenario.price) {
    if (p.type != model.type) continue;
    const int j = elapsed_steps(year, p.from_year, p.to_year);
    price *= std::pow(1.0 + p.annual_rate * factors.price_factor(model.type), j);
  }
  return price;
}

double effective_efficiency(const LampModel& model, int year, const RunFactors& factors,
                            const MarketTrends& trends) {
  if (model.type != LampType::LED) return model.base_efficiency;
  const int k = std::clamp(year - trends.led_introduction_year, 0, trends.led_efficiency_steps);
  const double grown =
      model.base_efficiency * std::pow(1.0 + trends.led_efficiency_growth * factors.led_innovation, k);
  return std::min(trends.efficiency_cap, grown);
}

bool is_available(const LampModel& model, int year, const Scenario& scenario,
                  const MarketTrends& trends) {
  if (scenario.is_banned(model.type, year)) return false;
  if (model.type == LampType::LED) {
    return model.initially_available || year >= trends.led_introduction_year;
  }
  return model.initially_available;
}

MarketState::MarketState(const Catalog& catalog, const Scenario& scenario,
                         const RunFactors& factors, int month_index, const MarketTrends& trends)
    : catalog_(&catalog), month_(month_index) {
  const int y = year();
  price_.reserve(catalog.size());
  efficiency_.reserve(catalog.size());
  available_.reserve(catalog.size());
  for (const auto& m : catalog) {
    price_.push_back(effective_price(m, y, scenario, factors, trends));
    efficiency_.push_back(effective_efficiency(m, y, factors, trends));
    const bool ok = is_available(m, y, scenario, trends);
    available_.push_back(ok ? 1 : 0);
    if (ok) available_ids_.push_back(m.id);
  }
}

}  // namespace lumsim
