#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ned {

enum class ErrorKind {
  IndexOutOfRange,
  SingularTransition,
  NonpositiveWeight,
  UnknownName,
  ParamConstraintViolated,
  NotAProjector,
  EmptyGrid,
  NoSpectralGap,
  BracketNotResolvent,
  FiberMismatch,
  WhitneyFailure,
  RankDegenerate,
  IllConditionedBasis,
  IndefiniteGram,
  CertificateMissing,
  CutPointNotResolvent,
  BlockSpectrumMismatch,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ned
