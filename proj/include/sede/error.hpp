#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sede {

enum class ErrorCode {
  InvalidArgument,
  MalformedData,
  DivisionByZero,
  NotOnCurve,
  EncodingFailure,
  DecodingFailure,
  BadRandomness,
  InsufficientContributions,
  InvalidPolicy,
  DuplicateIndex,
  NotInQuorum,
  InsufficientShares,
  KeyMismatch,
  TreeFull,
  InvalidArity,
  ConservationViolation,
  UnknownCommitment,
  AlreadySpent,
  InvalidProof,
  DoubleSpend,
  UnknownRoot,
  NegativePoolBalance,
  NotEnrolled,
  UnknownTransaction,
  DuplicateGuardian,
  QuorumNotApproved,
  InvalidRequest,
  InvalidTransition,
  CommitmentNotFound,
  WitnessMismatch,
  InvalidConfig,
  ScenarioParseError,
};

std::string_view to_string(ErrorCode code) noexcept;
/// Inverse of to_string; nullopt for unknown names.
std::optional<ErrorCode> parse_error_code(std::string_view name) noexcept;

/// True for errors that represent a ledger or guardian rejection rather than
/// bad user input. The CLI maps these to exit code 3.
bool is_protocol_rejection(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace sede
