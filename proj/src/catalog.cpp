#include "lumsim/catalog.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lumsim/csv.hpp"
#include "lumsim/errors.hpp"

namespace lumsim {

const std::string_view kStandardCatalogCsv =
    "type,price_eur,efficiency_pct,colour_pct,rampup_s,lifetime_months,available\n"
    "LED,30.00,63,10,1,125,N\n"
    "LED,25.00,60,10,1,167,N\n"
    "LED,20.00,60,10,1,208,N\n"
    "LED,15.00,60,15,1,167,N\n"
    "LED,12.50,60,10,2,208,N\n"
    "CFL,9.30,80,30,80,83,Y\n"
    "CFL,8.40,90,15,80,83,Y\n"
    "CFL,7.80,90,15,40,100,Y\n"
    "CFL,7.80,90,15,40,83,Y\n"
    "CFL,7.00,90,15,40,83,Y\n"
    "CFL,5.00,70,15,1,17,Y\n"
    "CFL,3.20,70,15,1,8,Y\n"
    "CFL,3.20,60,15,1,17,Y\n"
    "CFL,2.50,60,15,1,17,Y\n"
    "Incandescent,3.00,30,5,1,17,Y\n"
    "Incandescent,2.70,50,5,1,8,Y\n"
    "Incandescent,1.80,50,5,1,8,Y\n"
    "Incandescent,1.80,40,5,1,8,Y\n"
    "Incandescent,1.40,50,5,1,8,Y\n";

namespace {

constexpr std::string_view kHeader =
    "type,price_eur,efficiency_pct,colour_pct,rampup_s,lifetime_months,available";

std::string format_number(double value) {
  // Integral values print without decimals; everything else with the shortest exact form.
  const double rounded = std::round(value * 1e6) / 1e6;
  char buf[64];
  if (rounded == std::floor(rounded)) {
    std::snprintf(buf, sizeof buf, "%.0f", rounded);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", rounded);
  }
  return buf;
}

}  // namespace

std::string_view to_string(LampType type) {
  switch (type) {
    case LampType::Incandescent:
      return "Incandescent";
    case LampType::CFL:
      return "CFL";
    case LampType::LED:
      return "LED";
  }
  return "?";
}

std::optional<LampType> parse_lamp_type(std::string_view name) {
  for (LampType t : kAllLampTypes) {
    if (to_string(t) == name) return t;
  }
  // Lower-case spellings are accepted in scenario files.
  if (name == "incandescent") return LampType::Incandescent;
  if (name == "cfl") return LampType::CFL;
  if (name == "led") return LampType::LED;
  return std::nullopt;
}

Catalog::Catalog(std::vector<LampModel> models) : models_(std::move(models)) {
  for (std::size_t i = 0; i < models_.size(); ++i) models_[i].id = i;
}

Catalog Catalog::standard() { return parse_csv(kStandardCatalogCsv); }

const LampModel& Catalog::at(std::size_t id) const {
  if (id >= models_.size()) {
    throw LookupError("unknown lamp model id " + std::to_string(id));
  }
  return models_[id];
}

Catalog Catalog::parse_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ConfigError("catalog CSV: missing header");
  if (csv::join(rows.front()) != kHeader) {
    throw ConfigError("catalog CSV: expected header '" + std::string(kHeader) + "'");
  }
  std::vector<LampModel> models;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "catalog CSV line " + std::to_string(r + 1);
    if (row.size() != 7) throw ConfigError(where + ": expected 7 fields");
    LampModel m;
    const auto type = parse_lamp_type(row[0]);
    if (!type) throw ConfigError(where + ": unknown lamp type '" + row[0] + "'");
    m.type = *type;
    m.base_price = csv::to_double(row[1], where);
    m.base_efficiency = csv::to_double(row[2], where) / 100.0;
    m.colour_discrepancy = csv::to_double(row[3], where) / 100.0;
    m.ramp_up = csv::to_double(row[4], where);
    m.mean_lifetime = csv::to_double(row[5], where);
    if (row[6] == "Y") {
      m.initially_available = true;
    } else if (row[6] == "N") {
      m.initially_available = false;
    } else {
      throw ConfigError(where + ": availability must be Y or N");
    }
    if (!(m.base_price > 0) || !(m.base_efficiency > 0 && m.base_efficiency <= 1) ||
        !(m.colour_discrepancy >= 0 && m.colour_discrepancy <= 1) || !(m.ramp_up >= 0) ||
        !(m.mean_lifetime > 0)) {
      throw ConfigError(where + ": value out of range");
    }
    models.push_back(m);
  }
  return Catalog{std::move(models)};
}

Catalog Catalog::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open catalog file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string Catalog::to_csv() const {
  std::string out(kHeader);
  out += '\n';
  char price[32];
  for (const auto& m : models_) {
    std::snprintf(price, sizeof price, "%.2f", m.base_price);
    out += to_string(m.type);
    out += ',';
    out += price;
    out += ',' + format_number(m.base_efficiency * 100.0);
    out += ',' + format_number(m.colour_discrepancy * 100.0);
    out += ',' + format_number(m.ramp_up);
    out += ',' + format_number(m.mean_lifetime);
    out += m.initially_available ? ",Y\n" : ",N\n";
  }
  return out;
}

}  // namespace lumsim
