#pragma once

#include <stdexcept>
#include <string>

namespace csparrow {

// Every failure the library can signal, one code per contract violation.
enum class ErrorCode {
  // DIMACS / formula construction
  MissingHeader,
  ClauseCountMismatch,
  VarOutOfRange,
  EmptyClause,
  TautologicalClause,
  ClauseTooWide,
  DuplicateLiteral,
  InvalidToken,
  // evaluation / assignments
  LengthMismatch,
  // flip engine / solvers
  TooManyVariables,
  NoCandidates,
  // Markov analysis
  EpsilonRequired,
  NotConverged,
  EmptyClass,
  DegenerateChain,
  InvalidProbabilities,
  // experiments
  InvalidConfig,
  UnsatInstance,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::ClauseCountMismatch: return "ClauseCountMismatch";
    case ErrorCode::VarOutOfRange: return "VarOutOfRange";
    case ErrorCode::EmptyClause: return "EmptyClause";
    case ErrorCode::TautologicalClause: return "TautologicalClause";
    case ErrorCode::ClauseTooWide: return "ClauseTooWide";
    case ErrorCode::DuplicateLiteral: return "DuplicateLiteral";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::EpsilonRequired: return "EpsilonRequired";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::DegenerateChain: return "DegenerateChain";
    case ErrorCode::InvalidProbabilities: return "InvalidProbabilities";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnsatInstance: return "UnsatInstance";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace csparrow
