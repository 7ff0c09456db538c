#pragma once

#include <stdexcept>
#include <string>

namespace corrobench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-domain numeric parameter (negative sigma, non-monotone warp, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent inputs: dimension mismatch, label id out of range.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A metric whose denominator vanishes (empty confusion matrix, zero reference degradation).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace corrobench
