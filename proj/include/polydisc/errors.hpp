#pragma once

#include <stdexcept>
#include <string>

namespace polydisc {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  DegreeOverflow,
  SingularGram,
  NonVanishingViolation,
  StepTooCoarse,
  InsufficientCap,
  RankDeficient,
  FitFailed,
  ParseError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DegreeOverflow: return "degree_overflow";
    case ErrorCode::SingularGram: return "singular_gram";
    case ErrorCode::NonVanishingViolation: return "non_vanishing_violation";
    case ErrorCode::StepTooCoarse: return "step_too_coarse";
    case ErrorCode::InsufficientCap: return "insufficient_cap";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::FitFailed: return "fit_failed";
    case ErrorCode::ParseError: return "parse_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polydisc
