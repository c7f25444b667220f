#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kramers {

/// Raised when a model, run, or sweep is configured outside its contract.
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by linear-algebra kernels (singular solves, factorization failures).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time integrator produced a non-finite state.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(std::size_t step, double time, const std::string& what)
      : std::runtime_error(what + " (step " + std::to_string(step) +
                           ", t = " + std::to_string(time) + ")"),
        step_(step),
        time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

}  // namespace kramers
