#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ipiag {

using Vector = Eigen::VectorXd;
using Index = std::int64_t;

/// Malformed arguments: dimension mismatch, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An object was used before it reached a valid state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A non-finite value appeared in the iteration.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, Index iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  Index iteration() const { return iteration_; }

 private:
  Index iteration_;
};

/// The objective blew past the divergence threshold.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A delay schedule broke its declared staleness bound or read from the future.
class ScheduleInvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

inline void require_dimension(const Vector& v, Index expected, const char* what) {
  if (v.size() != expected) {
    throw InputError(std::string(what) + ": expected length " + std::to_string(expected) +
                     ", got " + std::to_string(v.size()));
  }
}

}  // namespace ipiag
