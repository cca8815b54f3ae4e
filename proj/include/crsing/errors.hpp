#pragma once

#include <stdexcept>
#include <string>

namespace crsing {

enum class ErrorCode {
  NotHermitian,
  NotSymmetric,
  DimensionMismatch,
  WitnessNotConverged,
  StabilizerSolveFailed,
  NCongruenceFailed,
  NotStandardPosition,
  TruncationTooLow,
  NonInvertibleC,
  PreconditionViolated,
  DenominatorVanishes,
  NoConvergence,
  ResidualTooLarge,
  BadParams,
  ParseError,
  Singular,
};

const char *error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace crsing
