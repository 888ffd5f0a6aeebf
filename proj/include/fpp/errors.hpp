#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

/// Input or configuration does not satisfy a documented schema/precondition.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computational budget (enumeration cap, box budget, max depth) was exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked invariant failed at runtime.
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fpp

namespace fpp {

/// An iterative scheme stopped before meeting its tolerance. Carries the
/// last bracket [lower, upper] of the quantity being computed.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower(lower), upper(upper) {}
  double lower;
  double upper;
};

}  // namespace fpp
