#include "sepwave/errors.hpp"

namespace sepwave {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EigendecompositionFailure: return "EigendecompositionFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorKind::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorKind::NoRegularizingGamma: return "NoRegularizingGamma";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::RhoDegenerate: return "RhoDegenerate";
    case ErrorKind::RankFull: return "RankFull";
    case ErrorKind::ConsistencyViolation: return "ConsistencyViolation";
    case ErrorKind::BoundaryExtensionInconsistent: return "BoundaryExtensionInconsistent";
    case ErrorKind::InconsistentSystem: return "InconsistentSystem";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

ErrorCategory category(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EigendecompositionFailure:
    case ErrorKind::DomainError:
    case ErrorKind::ZeroVector:
    case ErrorKind::SizeCapExceeded:
      return ErrorCategory::Numerical;
    case ErrorKind::ParseError:
    case ErrorKind::ShapeError:
    case ErrorKind::NonFiniteValue:
    case ErrorKind::InvalidParameter:
    case ErrorKind::IoError:
      return ErrorCategory::Input;
    default:
      return ErrorCategory::ModelRejection;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace sepwave
