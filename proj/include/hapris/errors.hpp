#pragma once

#include <stdexcept>
#include <string>

namespace hapris {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A lower parameter of a hypergeometric series sits on (or within 1e-9 of)
/// a non-positive integer, where the Pochhammer denominator vanishes.
class SingularParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative evaluation failed: series or quadrature did not reach the
/// requested tolerance, or cancellation destroyed the significant digits.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form capacity requested too close to one of its removable poles.
class NearPoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid scenario or command-line configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hapris
