#include "sede/error.hpp"

namespace sede {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedData: return "MalformedData";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotOnCurve: return "NotOnCurve";
    case ErrorCode::EncodingFailure: return "EncodingFailure";
    case ErrorCode::DecodingFailure: return "DecodingFailure";
    case ErrorCode::BadRandomness: return "BadRandomness";
    case ErrorCode::InsufficientContributions: return "InsufficientContributions";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::NotInQuorum: return "NotInQuorum";
    case ErrorCode::InsufficientShares: return "InsufficientShares";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::TreeFull: return "TreeFull";
    case ErrorCode::InvalidArity: return "InvalidArity";
    case ErrorCode::ConservationViolation: return "ConservationViolation";
    case ErrorCode::UnknownCommitment: return "UnknownCommitment";
    case ErrorCode::AlreadySpent: return "AlreadySpent";
    case ErrorCode::InvalidProof: return "InvalidProof";
    case ErrorCode::DoubleSpend: return "DoubleSpend";
    case ErrorCode::UnknownRoot: return "UnknownRoot";
    case ErrorCode::NegativePoolBalance: return "NegativePoolBalance";
    case ErrorCode::NotEnrolled: return "NotEnrolled";
    case ErrorCode::UnknownTransaction: return "UnknownTransaction";
    case ErrorCode::DuplicateGuardian: return "DuplicateGuardian";
    case ErrorCode::QuorumNotApproved: return "QuorumNotApproved";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::CommitmentNotFound: return "CommitmentNotFound";
    case ErrorCode::WitnessMismatch: return "WitnessMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ScenarioParseError: return "ScenarioParseError";
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorCode::ScenarioParseError); ++i) {
    auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return std::nullopt;
}

bool is_protocol_rejection(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidProof:
    case ErrorCode::DoubleSpend:
    case ErrorCode::UnknownRoot:
    case ErrorCode::NegativePoolBalance:
    case ErrorCode::AlreadySpent:
    case ErrorCode::UnknownCommitment:
    case ErrorCode::QuorumNotApproved:
    case ErrorCode::InsufficientContributions:
    case ErrorCode::InvalidRequest:
    case ErrorCode::InvalidTransition:
    case ErrorCode::UnknownTransaction:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace sede
