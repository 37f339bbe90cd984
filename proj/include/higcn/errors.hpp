#pragma once

#include <stdexcept>
#include <string>

namespace higcn {

// Caller misuse: bad arguments, unknown subcommand, malformed config.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data that cannot be ingested or is inconsistent with its declared shape.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical preconditions violated (non-symmetric input, size caps, degenerate statistics).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stochastic search ran out of valid moves before reaching its goal.
class SaturationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace higcn
