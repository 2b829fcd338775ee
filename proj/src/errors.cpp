#include "rtor/errors.hpp"

namespace rtor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::SingularSpectrum: return "singular-spectrum";
    case ErrorCode::OnCut: return "on-cut";
    case ErrorCode::AssumptionI: return "assumption-I-violated";
    case ErrorCode::AssumptionII: return "assumption-II-violated";
    case ErrorCode::InvalidRepresentation: return "invalid-representation";
    case ErrorCode::InvalidCW: return "invalid-cw";
    case ErrorCode::InvalidChirality: return "invalid-chirality";
    case ErrorCode::InvalidLensParameters: return "invalid-lens-parameters";
    case ErrorCode::GenerationFailure: return "generation-failure";
    case ErrorCode::SplittingFailure: return "splitting-failure";
    case ErrorCode::DegenerateSplitting: return "degenerate-splitting";
    case ErrorCode::DegenerateBasis: return "degenerate-basis";
    case ErrorCode::MissingLIntegral: return "missing-l-integral";
    case ErrorCode::UnknownCell: return "unknown-cell";
    case ErrorCode::MissingCoefficients: return "missing-coefficients";
    case ErrorCode::NonFiniteInput: return "non-finite-input";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Usage: return "usage";
  }
  return "unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::AssumptionI:
    case ErrorCode::AssumptionII:
    case ErrorCode::SingularSpectrum:
      return 3;
    case ErrorCode::NonConvergence:
    case ErrorCode::OnCut:
    case ErrorCode::SplittingFailure:
    case ErrorCode::DegenerateSplitting:
    case ErrorCode::DegenerateBasis:
    case ErrorCode::GenerationFailure:
      return 4;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace rtor
