// Copyright 2026 The subjidx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBJIDX_ERROR_HPP_
#define SUBJIDX_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace subjidx {

enum class ErrorCode {
  kUnknownDescriptor,
  kEquivalenceCycle,
  kUnreachable,
  kEmptySystem,
  kEmptyTitle,
  kMalformedLine,
  kInvalidEncoding,
  kMultipleParents,
  kUnknownParent,
  kInsufficientBins,
  kInsufficientData,
  kNonPositiveCount,
  kDegenerateDistribution,
  kMissingTable,
  kSpecInvalid,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDescriptor: return "UnknownDescriptor";
    case ErrorCode::kEquivalenceCycle: return "EquivalenceCycle";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kEmptySystem: return "EmptySystem";
    case ErrorCode::kEmptyTitle: return "EmptyTitle";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kInvalidEncoding: return "InvalidEncoding";
    case ErrorCode::kMultipleParents: return "MultipleParents";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kInsufficientBins: return "InsufficientBins";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNonPositiveCount: return "NonPositiveCount";
    case ErrorCode::kDegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::kMissingTable: return "MissingTable";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

/// The single exception type thrown by the library. `code()` identifies the
/// failure; parse failures also carry the 1-based source line (0 otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace subjidx

#endif  // SUBJIDX_ERROR_HPP_
