// Copyright 2026 The KDPE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdpe {

enum class ErrorKind {
  kDegenerateRotation,
  kEmptySupport,
  kStepOutOfRange,
  kFormatError,
  kValidationError,
  kIoFailure,
  kInvalidSpec,
  kInvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDegenerateRotation: return "DegenerateRotation";
    case ErrorKind::kEmptySupport: return "EmptySupport";
    case ErrorKind::kStepOutOfRange: return "StepOutOfRange";
    case ErrorKind::kFormatError: return "FormatError";
    case ErrorKind::kValidationError: return "ValidationError";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (CLI, server) can map it to a structured error without parsing
/// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kdpe
