#pragma once

#include <stdexcept>
#include <string>

namespace renewal {

// Error taxonomy mirrored by the CLI exit codes: configuration problems
// exit with 2, numerical failures with 3, I/O failures with 4.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-positive drift where a crossing experiment needs mu > 0. Detected at
// runtime (estimated drift), hence a numerics error.
class DriftError : public NumericsError {
 public:
  using NumericsError::NumericsError;
};

// Exact tie among rank-test observations. Probability zero for continuous
// data; callers resample the offending pair.
class TieError : public NumericsError {
 public:
  using NumericsError::NumericsError;
};

}  // namespace renewal
