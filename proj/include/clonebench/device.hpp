// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "clonebench/bitstring.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

// Operating point of a simulated device.
struct EnvironmentConditions {
  double temperature_c = 25.0;
  double voltage_v = 1.26;

  static constexpr double kMinTemperature = -40.0;
  static constexpr double kMaxTemperature = 85.0;
  static constexpr double kMinVoltage = 1.20;
  static constexpr double kMaxVoltage = 1.32;

  static EnvironmentConditions nominal() { return {}; }
  // Throws invalid-parameter outside [-40, 85] C x [1.20, 1.32] V.
  void validate() const;
};

// Uniform view of anything that maps a challenge to response bits: the
// classic PUFs, the SUC, and attack targets. A null noise stream means a
// zero-noise (reference) evaluation.
class ResponseDevice {
 public:
  virtual ~ResponseDevice() = default;

  virtual std::string model() const = 0;
  // 0 when the device ignores its challenge (e.g. an SRAM power-up).
  virtual std::size_t challenge_bits() const = 0;
  virtual std::size_t response_bits() const = 0;
  virtual BitString respond(const BitString& challenge,
                            const EnvironmentConditions& env,
                            Rng* noise) const = 0;
};

}  // namespace clonebench
