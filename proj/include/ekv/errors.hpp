#pragma once

#include <stdexcept>
#include <string>

namespace ekv {

enum class ErrorKind {
  NonInvertibleDeformation,
  NonMonotoneEnthalpy,
  NegativeInitialTemperature,
  CFLViolation,
  UnsupportedDomain,
  QuadratureUnderResolved,
  SingularGram,
  StepRejected,
  InvalidState,
  Timeout,
  SingularMass,
  DegenerateHeatCapacity,
  NotIsolated,
  InsufficientDecay,
  UsageError,
  ParseError,
  ValidationError,
  IOError
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the stepper; carries a dt that is expected to succeed.
class StepRejected : public Error {
 public:
  StepRejected(const std::string& what, double suggested_dt)
      : Error(ErrorKind::StepRejected, what), suggested_dt(suggested_dt) {}
  double suggested_dt;
};

// Config problems keep their source position when there is one.
class ConfigError : public Error {
 public:
  ConfigError(ErrorKind kind, const std::string& what, int line = -1, int column = -1)
      : Error(kind, what), line(line), column(column) {}
  int line;
  int column;
};

}  // namespace ekv
