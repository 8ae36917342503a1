#pragma once

#include <stdexcept>
#include <string>

namespace pacmarl {

// Base for every input-contract failure. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A field is outside its domain; `field()` names it.
class ValidationError : public InputError {
 public:
  ValidationError(std::string field, const std::string& why)
      : InputError(field + ": " + why), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A logarithm inside a bound is non-positive, so the bound says nothing.
class VacuousBoundError : public InputError {
 public:
  using InputError::InputError;
};

// Misaligned regime with epsilon <= 2 * alpha.
class AlignmentInfeasibleError : public InputError {
 public:
  AlignmentInfeasibleError(double epsilon, double alpha);
  // Infimum of feasible epsilon values (exclusive).
  double min_feasible_epsilon() const noexcept { return min_epsilon_; }

 private:
  double min_epsilon_;
};

// A bound was asked for under a regime its inputs contradict (e.g. alpha != 0).
class RegimeMismatchError : public InputError {
 public:
  using InputError::InputError;
};

// Model arrangement or task mode does not match the requested operation.
class ModeMismatchError : public InputError {
 public:
  using InputError::InputError;
};

// Gradient descent produced a non-finite or increasing objective.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double learning_rate, const std::string& detail);
  double learning_rate() const noexcept { return learning_rate_; }

 private:
  double learning_rate_;
};

}  // namespace pacmarl
