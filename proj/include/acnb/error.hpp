// Copyright 2026 The ACN Bounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACNB_ERROR_HPP_
#define ACNB_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace acnb {

enum class ErrorCode {
  kInvalidInput,
  kCapabilityViolation,
  kResourceLimit,
  kConfiguration,
  kNotFound,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kCapabilityViolation:
      return "capability-violation";
    case ErrorCode::kResourceLimit:
      return "resource-limit";
    case ErrorCode::kConfiguration:
      return "configuration";
    case ErrorCode::kNotFound:
      return "not-found";
  }
  return "unknown";
}

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace acnb

#endif  // ACNB_ERROR_HPP_
