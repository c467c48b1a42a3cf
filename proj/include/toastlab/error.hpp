// Copyright 2026 The Toastlab Authors.
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

#ifndef TOASTLAB_ERROR_HPP_
#define TOASTLAB_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace toastlab {

enum class ErrorCode {
  kInvalidParameter,
  kUnsupportedTopology,
  kDegenerateInput,
  kNotFillable,
  kInvalidToast,
  kNotFound,
  kGenerationFailed,
  kNoEscape,
  kNoSolution,
  kNoCycle,
  kNotEvenDegree,
  kInvalidInput,
  kParityError,
  kOutOfRange,
  kChainTooShort,
  kUndefinedRatio,
  kBudgetExceeded,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kUnsupportedTopology: return "unsupported-topology";
    case ErrorCode::kDegenerateInput: return "degenerate-input";
    case ErrorCode::kNotFillable: return "not-fillable";
    case ErrorCode::kInvalidToast: return "invalid-toast";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kGenerationFailed: return "generation-failed";
    case ErrorCode::kNoEscape: return "no-escape";
    case ErrorCode::kNoSolution: return "no-solution";
    case ErrorCode::kNoCycle: return "no-cycle";
    case ErrorCode::kNotEvenDegree: return "not-even-degree";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kParityError: return "parity-error";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kChainTooShort: return "chain-too-short";
    case ErrorCode::kUndefinedRatio: return "undefined-ratio";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

/// Thrown by constructions whose preconditions fail. Verifiers never throw;
/// they report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace toastlab

#endif  // TOASTLAB_ERROR_HPP_
