#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vcd {

enum class ErrorCode {
  ToleranceNotMet,
  NonFiniteSample,
  MaxStepsExceeded,
  NonFiniteState,
  OutOfDomain,
  SingularEndpoint,
  ViolatedOrdering,
  BoundaryMismatch,
  ShadowMismatch,
  PointNotOnSheet,
  BandCollision,
  InequivalentShapes,
  ZeroCovector,
  SigmaMismatch,
  TotalActionMismatch,
  GeometryMismatch,
  NotCompactlySupported,
  TracingFailure,
  ResidualCap,
  ConfigParse,
  InvalidArgument,
};

auto to_string(ErrorCode code) -> std::string_view;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] auto code() const noexcept -> ErrorCode { return code_; }

private:
  ErrorCode code_;
};

}  // namespace vcd
