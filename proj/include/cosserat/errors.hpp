#pragma once

#include <stdexcept>
#include <string>

namespace cosserat {

// Every guard in the library throws Error with one of these codes. The C API
// and the CLI map them to status 2 (bad input or violated precondition);
// anything else that escapes is status 1.
enum class ErrorCode {
  InvalidArgument = 1,
  InvalidUnitVector,
  NotAxisRotation,
  NotTangent,
  ResolutionTooCoarse,
  OutsideDomain,
  DegeneratePatch,
  AmbiguousLift,
  LiftObstruction,
  DegreeUnresolved,
  DegenerateTriangle,
  AmbiguousSeparation,
  ValueNotRegular,
  AntipodalInterpolation,
  AlphaTooLarge,
  SegmentTooClose,
  EpsilonTooLarge,
  SeparationViolated,
  NumericalBlowup,
  BoundaryMismatch,
  NoAdmissibleDisc,
  FormatError,
  Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace cosserat
