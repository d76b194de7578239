// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/error.hpp"

namespace clonebench {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kInvalidChallenge: return "invalid-challenge";
    case ErrorCode::kInvalidPair: return "invalid-pair";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidSbox: return "invalid-sbox";
    case ErrorCode::kInfeasibleDesign: return "infeasible-design";
    case ErrorCode::kGenerationFailure: return "generation-failure";
    case ErrorCode::kInsufficientSampling: return "insufficient-sampling";
    case ErrorCode::kInsufficientPopulation: return "insufficient-population";
    case ErrorCode::kInvalidDataset: return "invalid-dataset";
    case ErrorCode::kEnrollmentAborted: return "enrollment-aborted";
    case ErrorCode::kDataError: return "data-error";
  }
  return "unknown-error";
}

}  // namespace clonebench
