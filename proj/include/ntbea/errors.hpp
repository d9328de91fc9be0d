#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ntbea {

// Raised for invalid user-supplied configuration (bad flags, empty spaces...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a value violates a structural invariant, e.g. a point that does
// not belong to its search space.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when the fitness evaluator fails part-way through an optimisation run.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::int64_t evals_used)
      : std::runtime_error(what + " (after " + std::to_string(evals_used) +
                           " evaluations)"),
        evals_used_(evals_used) {}

  std::int64_t evals_used() const noexcept { return evals_used_; }

 private:
  std::int64_t evals_used_;
};

}  // namespace ntbea
