#include "e1lab/errors.hpp"

namespace e1lab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::QuadratureUnstable: return "QuadratureUnstable";
    case ErrorKind::DomainExceeded: return "DomainExceeded";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::AmbiguousFit: return "AmbiguousFit";
    case ErrorKind::NearCharacteristic: return "NearCharacteristic";
    case ErrorKind::NonsmoothInitialData: return "NonsmoothInitialData";
    case ErrorKind::CFLViolation: return "CFLViolation";
  }
  return "Unknown";
}

}  // namespace e1lab
