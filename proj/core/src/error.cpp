#include "anvil/error.hpp"

namespace anvil {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownContinuation: return "UnknownContinuation";
    case ErrorCode::kFactorOutOfRange: return "FactorOutOfRange";
    case ErrorCode::kUnsupportedRuleVariant: return "UnsupportedRuleVariant";
    case ErrorCode::kBadFieldCount: return "BadFieldCount";
    case ErrorCode::kRuleSetInvalid: return "RuleSetInvalid";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyCaption: return "EmptyCaption";
    case ErrorCode::kEmptyQuery: return "EmptyQuery";
    case ErrorCode::kIndexEmpty: return "IndexEmpty";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kNoRelevant: return "NoRelevant";
  }
  return "Unknown";
}

namespace {

std::string located(std::size_t line, std::size_t column,
                    const std::string& message) {
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + message;
}

}  // namespace

SyntaxError::SyntaxError(ErrorCode code, std::size_t line, std::size_t column,
                         const std::string& message)
    : Error(code, located(line, column, message)), line_(line), column_(column) {}

}  // namespace anvil
