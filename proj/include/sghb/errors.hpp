#pragma once

#include <stdexcept>
#include <string>

namespace sghb {

/// Invalid input: bad multi-index, mismatched dimensions, out-of-range
/// parameters. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-convergence, failed factorization,
/// resource cap exceeded). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sghb
