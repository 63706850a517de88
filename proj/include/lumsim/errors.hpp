#pragma once

#include <stdexcept>
#include <string>

namespace lumsim {

/// Invalid configuration, scenario definition, or input file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run could not continue (e.g. nothing purchasable). Maps to exit code 1.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace lumsim
