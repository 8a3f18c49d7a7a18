#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace anvil {

enum class ErrorCode {
  kEmptyInput,
  kUnknownVariable,
  kSyntaxError,
  kUnknownContinuation,
  kFactorOutOfRange,
  kUnsupportedRuleVariant,
  kBadFieldCount,
  kRuleSetInvalid,
  kDuplicateId,
  kEmptyCaption,
  kEmptyQuery,
  kIndexEmpty,
  kIoError,
  kFormatVersionMismatch,
  kNoRelevant,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the rule-file readers; line and column are 1-based, column 0
// when only the line is known.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, std::size_t line, std::size_t column,
              const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace anvil
