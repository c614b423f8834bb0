#pragma once

#include <stdexcept>
#include <string>

namespace nvmagnon {

/// A configuration or parameter value violates an invariant. `field()` names
/// the offending input (dotted config path where one is known).
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The inputs are individually valid but the physics cannot be evaluated
/// (band edge crossed, no resonance bracket, state left the CPTP set, ...).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nvmagnon
