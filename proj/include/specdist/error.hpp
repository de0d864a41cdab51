#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specdist {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  DimensionMismatch,
  NotSquare,
  Singular,
  SolverFailure,
  OracleUnavailable,
  ContourMargin,
  SingularityInside,
  SpectrumOnCut,
  ClusterSeparation,
  MalformedDocument,
  LengthMismatch,
  UnknownKind,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specdist
