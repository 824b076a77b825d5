// SPDX-License-Identifier: Apache-2.0

#include "syncperf/error.hpp"

namespace syncperf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
      return "E_VALIDATION";
    case ErrorCode::kParse:
      return "E_PARSE";
    case ErrorCode::kSchema:
      return "E_SCHEMA";
    case ErrorCode::kUnitMismatch:
      return "E_UNIT";
    case ErrorCode::kUnknownExperiment:
      return "E_UNKNOWN_EXPERIMENT";
    case ErrorCode::kDegenerateDesign:
      return "E_DEGENERATE";
    case ErrorCode::kInsufficientData:
      return "E_INSUFFICIENT_DATA";
    case ErrorCode::kIo:
      return "E_IO";
  }
  return "E_UNKNOWN";
}

namespace {

std::string with_position(std::size_t line, std::size_t column, const std::string& message) {
  if (line == 0) return message;
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + message;
}

}  // namespace

ParseError::ParseError(ErrorCode code, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(code, with_position(line, column, message)), line_(line), column_(column) {}

}  // namespace syncperf
