#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtor {

enum class ErrorCode {
  Dimension,
  NonConvergence,
  SingularSpectrum,
  OnCut,
  AssumptionI,
  AssumptionII,
  InvalidRepresentation,
  InvalidCW,
  InvalidChirality,
  InvalidLensParameters,
  GenerationFailure,
  SplittingFailure,
  DegenerateSplitting,
  DegenerateBasis,
  MissingLIntegral,
  UnknownCell,
  MissingCoefficients,
  NonFiniteInput,
  Parse,
  Usage,
};

std::string_view to_string(ErrorCode code);

/// Exit status the CLI reports for an error of this kind:
/// 2 usage/validation, 3 violated mathematical assumption, 4 numerical failure.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rtor
