#pragma once

#include <stdexcept>

namespace blochguide {

// Invalid geometry, medium, configuration or argument.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical kernel failed: eigensolver, factorization, root search, band matching.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blochguide
