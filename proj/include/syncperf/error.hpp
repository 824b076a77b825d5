// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace syncperf {

// Machine-readable error classes. The CLI prints these as the prefix of every
// diagnostic line and maps them onto exit statuses.
enum class ErrorCode {
  kValidation,
  kParse,
  kSchema,
  kUnitMismatch,
  kUnknownExperiment,
  kDegenerateDesign,
  kInsufficientData,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::kValidation, message) {}
};

// Raised by the file loaders. line/column are 1-based; 0 means "not tied to a
// position" (e.g. a missing header key).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column,
             const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace syncperf
