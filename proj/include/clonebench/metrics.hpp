// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonebench/bitstring.hpp"
#include "clonebench/device.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

struct PopulationReport {
  std::string model;
  std::size_t n_devices = 0;
  double uniqueness_mean = 0;
  double uniqueness_std = 0;
  double uniformity = 0;
  double dof_bits = 0;
};

struct ReliabilityRow {
  double temperature_c = 0;
  double voltage_v = 0;
  double ber = 0;
};

struct ReliabilityTable {
  std::string model;
  std::size_t reps = 0;
  std::vector<ReliabilityRow> rows;
};

// A device's zero-noise, nominal-environment responses to `challenges`,
// concatenated.
BitString reference_response(const ResponseDevice& device,
                             std::span<const BitString> challenges);

// Pairwise fractional Hamming distance of reference responses.
// Needs >= 2 devices and >= 1 challenge (an empty BitString is a valid
// challenge for devices that ignore it).
PopulationReport uniqueness(std::span<const ResponseDevice* const> population,
                            std::span<const BitString> challenges);

// BER of `reps` noisy evaluations per grid point against the zero-noise
// nominal reference. reps >= 100.
ReliabilityTable reliability(const ResponseDevice& device,
                             std::span<const BitString> challenges,
                             std::span<const EnvironmentConditions> env_grid,
                             std::size_t reps, Rng& rng);

// Fraction of 1-bits across all responses.
double uniformity(std::span<const BitString> responses);

void to_json(nlohmann::json& j, const PopulationReport& r);
void from_json(const nlohmann::json& j, PopulationReport& r);
void to_json(nlohmann::json& j, const ReliabilityTable& t);
void from_json(const nlohmann::json& j, ReliabilityTable& t);

}  // namespace clonebench
