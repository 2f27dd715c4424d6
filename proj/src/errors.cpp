#include "carpet/errors.hpp"

namespace carpet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::PathTerminates: return "PathTerminates";
    case ErrorKind::BadBracket: return "BadBracket";
    case ErrorKind::UndecidedVerdict: return "UndecidedVerdict";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Mismatch: return "Mismatch";
  }
  return "Unknown";
}

}  // namespace carpet
