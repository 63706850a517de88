#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lumsim {

enum class LampType { Incandescent = 0, CFL = 1, LED = 2 };

inline constexpr std::size_t kLampTypeCount = 3;
inline constexpr std::array<LampType, kLampTypeCount> kAllLampTypes{
    LampType::Incandescent, LampType::CFL, LampType::LED};

std::string_view to_string(LampType type);
std::optional<LampType> parse_lamp_type(std::string_view name);

constexpr std::size_t index_of(LampType type) { return static_cast<std::size_t>(type); }

/// One catalog row. Efficiency and colour discrepancy are fractions of 1.
struct LampModel {
  std::size_t id = 0;
  LampType type = LampType::Incandescent;
  double base_price = 0.0;  // euros
  double base_efficiency = 0.0;
  double colour_discrepancy = 0.0;
  double ramp_up = 0.0;        // seconds
  double mean_lifetime = 0.0;  // months
  bool initially_available = true;

  bool operator==(const LampModel&) const = default;
};

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<LampModel> models);

  /// The 19-model lamp table (2006 settings).
  static Catalog standard();

  static Catalog parse_csv(std::string_view text);
  static Catalog load_csv(const std::filesystem::path& path);
  std::string to_csv() const;

  const LampModel& at(std::size_t id) const;
  std::size_t size() const { return models_.size(); }
  bool empty() const { return models_.empty(); }
  auto begin() const { return models_.begin(); }
  auto end() const { return models_.end(); }
  const std::vector<LampModel>& models() const { return models_; }

  bool operator==(const Catalog&) const = default;

 private:
  std::vector<LampModel> models_;
};

/// CSV rendering of Catalog::standard(); Catalog::standard().to_csv() reproduces it byte for byte.
extern const std::string_view kStandardCatalogCsv;

}  // namespace lumsim
