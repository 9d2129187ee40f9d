// Copyright 2026 The codeprobe Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace codeprobe {

enum class ErrorCode {
  kInvalidArgument,
  // lexer
  kUnlexableInput,
  // structure
  kUnbalancedDelimiters,
  kOverflow,
  // mutator
  kNoApplicableSite,
  // taskgen
  kInsufficientSamples,
  kClassTooSmall,
  // embedstore
  kIoFailure,
  kBadMagic,
  kVersionMismatch,
  kTruncatedFile,
  kNonFiniteValue,
  // probe
  kDegenerateInput,
  kShapeMismatch,
  kSampleMismatch,
  // report
  kMissingBaseline,
  kMixedLayerCounts,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnlexableInput: return "UnlexableInput";
    case ErrorCode::kUnbalancedDelimiters: return "UnbalancedDelimiters";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNoApplicableSite: return "NoApplicableSite";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kSampleMismatch: return "SampleMismatch";
    case ErrorCode::kMissingBaseline: return "MissingBaseline";
    case ErrorCode::kMixedLayerCounts: return "MixedLayerCounts";
  }
  return "Unknown";
}

// Every recoverable failure in the library is reported as an Error carrying
// a code, so callers can decide between skipping a sample and aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace codeprobe
