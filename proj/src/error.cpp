#include "madd/error.hpp"

namespace madd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidBinCount: return "InvalidBinCount";
    case ErrorCode::BinCountMismatch: return "BinCountMismatch";
    case ErrorCode::InvalidBandwidth: return "InvalidBandwidth";
    case ErrorCode::InvalidQuantile: return "InvalidQuantile";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::InvalidRatios: return "InvalidRatios";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::TrainingDiverged: return "TrainingDiverged";
    case ErrorCode::NotTrained: return "NotTrained";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  // 1 is left for unexpected failures, 2 for usage errors.
  return 10 + static_cast<int>(code);
}

}  // namespace madd
