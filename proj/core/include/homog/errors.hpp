#pragma once

#include <stdexcept>
#include <string>

namespace homog {

/// Poisson-type right-hand side violates the closed-manifold compatibility condition.
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An ODE trajectory left the admissible region (blow-up, missing event, step underflow).
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-hand side of a reduced system evaluated where it is not defined.
class SingularRhsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homog
