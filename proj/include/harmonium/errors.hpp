#pragma once

#include <stdexcept>
#include <string>

namespace harmonium {

/// Rejected input: bad counts, negative couplings, malformed quantum numbers.
class InvalidParameters : public std::invalid_argument {
 public:
  explicit InvalidParameters(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-SPD matrices, non-converged quadrature, overflow guards.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace harmonium
