// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clonebench {

enum class ErrorCode {
  kInvalidParameter,
  kInvalidChallenge,
  kInvalidPair,
  kInvalidInput,
  kInvalidSbox,
  kInfeasibleDesign,
  kGenerationFailure,
  kInsufficientSampling,
  kInsufficientPopulation,
  kInvalidDataset,
  kEnrollmentAborted,
  kDataError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace clonebench
