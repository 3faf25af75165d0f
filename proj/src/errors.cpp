#include "ekv/errors.hpp"

namespace ekv {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonInvertibleDeformation: return "NonInvertibleDeformation";
    case ErrorKind::NonMonotoneEnthalpy: return "NonMonotoneEnthalpy";
    case ErrorKind::NegativeInitialTemperature: return "NegativeInitialTemperature";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorKind::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::SingularMass: return "SingularMass";
    case ErrorKind::DegenerateHeatCapacity: return "DegenerateHeatCapacity";
    case ErrorKind::NotIsolated: return "NotIsolated";
    case ErrorKind::InsufficientDecay: return "InsufficientDecay";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace ekv
