#pragma once

#include <stdexcept>

namespace stablecos {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model, market, option or method parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside a characteristic function's strip of analyticity,
/// or a strike outside a pricer's grid.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Method configuration that is well-formed but not applicable.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-finite intermediate result, quadrature
/// non-convergence, reference mismatch.
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace stablecos
