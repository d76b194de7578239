// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace clonebench {

// End-to-end reproduction experiments, one per headline claim. Each runs
// from a single seed, measures, and judges itself against a fixed tolerance
// and wall-clock limit.

struct ReproResult {
  std::string name;
  bool pass = false;
  std::string summary;        // one line of measured values
  nlohmann::json measured;    // the same values, machine-readable
  double seconds = 0;
  double time_limit_seconds = 0;
};

struct ReproInfo {
  std::string name;
  std::string description;
  double time_limit_seconds;
};

// In execution order.
const std::vector<ReproInfo>& repro_catalog();

bool is_repro_name(std::string_view name);

// Throws invalid-parameter for an unknown name.
ReproResult run_repro(std::string_view name, std::uint64_t seed);

void to_json(nlohmann::json& j, const ReproResult& r);

}  // namespace clonebench
