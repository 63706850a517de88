#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace lumsim {

/// The eleven archetype dimensions, in CSV column order.
enum class Trait : std::size_t {
  LampsNeeded = 0,
  FunctionalTolerance,
  ColourTolerance,
  FinancialFocus,
  EnvironmentalFocus,
  SocialMindedness,
  SocialAgreeability,
  BaselineIncandescent,
  BaselineCfl,
  BaselineLed,
  Reserved,
};

inline constexpr std::size_t kTraitCount = 11;

/// CSV column names, indexed by Trait.
inline constexpr std::array<std::string_view, kTraitCount> kTraitColumns{
    "lamps",    "func_tol",  "colour_tol", "fin_focus", "env_focus", "soc_mind",
    "soc_agree", "base_inc", "base_cfl",   "base_led",  "reserved"};

std::optional<Trait> parse_trait(std::string_view column);

/// An archetype or a jittered per-agent copy. Every trait except LampsNeeded is a fraction in [0,1].
struct Preferences {
  std::array<double, kTraitCount> values{};

  double& operator[](Trait t) { return values[static_cast<std::size_t>(t)]; }
  double operator[](Trait t) const { return values[static_cast<std::size_t>(t)]; }

  int lamps_needed() const { return static_cast<int>((*this)[Trait::LampsNeeded]); }

  bool operator==(const Preferences&) const = default;
};

using Archetype = Preferences;

}  // namespace lumsim
