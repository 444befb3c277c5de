#pragma once

#include <stdexcept>
#include <string>

namespace imbue {

/// Base for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: shapes, hyperparameters, config values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-physical device state (e.g. non-positive resistance).
class DeviceModelError : public Error {
 public:
  using Error::Error;
};

/// Programming pulse does not match the requested transition.
class InvalidPulseError : public Error {
 public:
  using Error::Error;
};

/// Layout and device array disagree (missing cells, wrong sizes).
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given inputs (e.g. zero energy).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message names the file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed at runtime.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace imbue
