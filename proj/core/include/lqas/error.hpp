#pragma once

#include <stdexcept>
#include <string>

namespace lqas {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid hyperparameters, specs, or configuration documents.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Mismatched vector lengths, wire indices out of range, and similar.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Non-finite inputs where a finite number is required.
class NumericError : public Error {
  public:
    using Error::Error;
};

/// Malformed CSV, ansatz text, or JSON input. Carries the location when known.
class ParseError : public Error {
  public:
    using Error::Error;
};

class ScalingError : public Error {
  public:
    using Error::Error;
};

/// R² with a constant reference vector.
class UndefinedMetricError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace lqas
