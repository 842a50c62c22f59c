#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepwave {

enum class ErrorKind {
  // numerical failures
  EigendecompositionFailure,
  DomainError,
  ZeroVector,
  SizeCapExceeded,
  // model rejections
  DefectiveMatrix,
  DegenerateBoundary,
  NoRegularizingGamma,
  SingularShift,
  RhoDegenerate,
  RankFull,
  ConsistencyViolation,
  BoundaryExtensionInconsistent,
  InconsistentSystem,
  // input problems
  ParseError,
  ShapeError,
  NonFiniteValue,
  InvalidParameter,
  IoError,
};

enum class ErrorCategory { Numerical, ModelRejection, Input };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sepwave
