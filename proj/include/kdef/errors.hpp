#pragma once

#include <stdexcept>
#include <string>

namespace kdef {

// Invalid arguments, malformed input files, out-of-range indices.
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A factor failed the unitarity check; factor_index is 1-based.
struct NonUnitaryError : std::runtime_error {
  NonUnitaryError(const std::string& what, int factor_index)
      : std::runtime_error(what), factor_index(factor_index) {}
  int factor_index = 0;
};

// A size guard was exceeded (problem too large for the requested code path).
struct GuardExceededError : std::runtime_error {
  explicit GuardExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Two computation routes that must agree on an integer did not.
struct MethodDisagreementError : std::runtime_error {
  explicit MethodDisagreementError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kdef
