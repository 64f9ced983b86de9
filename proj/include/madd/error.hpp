#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace madd {

enum class ErrorCode {
  EmptyPopulation,
  InvalidProbability,
  InvalidBinCount,
  BinCountMismatch,
  InvalidBandwidth,
  InvalidQuantile,
  EmptyGroup,
  InvalidLambda,
  InvalidConfig,
  LengthMismatch,
  MissingLabels,
  InvalidRatios,
  EncodingError,
  TrainingDiverged,
  NotTrained,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Process exit status for a CLI failure with this code. Distinct per code,
// all nonzero.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace madd
