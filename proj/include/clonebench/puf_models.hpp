// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonebench/bitstring.hpp"
#include "clonebench/device.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

// Delay offsets of one switch stage. With challenge bit 0 the two racing
// signals go straight through; with bit 1 they swap lanes.
struct StageDelays {
  double straight_top = 0;
  double straight_bottom = 0;
  double cross_to_top = 0;
  double cross_to_bottom = 0;
};

// Additive-delay arbiter PUF. Response is 1 iff the top signal arrives
// later than the bottom one, i.e. w . phi(c) + noise > 0.
class ArbiterPuf {
 public:
  static constexpr double kDefaultNoiseSigma = 0.4;

  // Delays i.i.d. standard normal from a stream seeded by `seed`.
  static ArbiterPuf create(std::size_t n_stages, std::uint64_t seed,
                           double noise_sigma = kDefaultNoiseSigma);
  static ArbiterPuf from_delays(std::vector<StageDelays> delays,
                                double noise_sigma);
  // Builds a delay set whose linear reduction is exactly `weights`
  // (length n_stages + 1).
  static ArbiterPuf from_weights(std::span<const double> weights,
                                 double noise_sigma);

  std::size_t n_stages() const { return delays_.size(); }
  const std::vector<StageDelays>& stage_delays() const { return delays_; }
  const std::vector<double>& weights() const { return weights_; }
  double noise_sigma() const { return noise_sigma_; }

  // Number of distinct challenges, 2^n (as a double for n >= 64).
  double challenge_space_size() const;

 private:
  ArbiterPuf(std::vector<StageDelays> delays, double noise_sigma);

  std::vector<StageDelays> delays_;
  std::vector<double> weights_;
  double noise_sigma_;
};

// phi_i(c) = prod_{j >= i} (1 - 2 c_j), phi_n = 1.
std::vector<double> parity_features(const BitString& challenge);
void parity_features(const BitString& challenge, std::span<double> out);

// Arbiter noise scale: 1 + 0.01 |T - 25|.
double arbiter_env_scale(const EnvironmentConditions& env);

int arbiter_eval(const ArbiterPuf& puf, const BitString& challenge,
                 const EnvironmentConditions& env, Rng* noise);
int xor_arbiter_eval(std::span<const ArbiterPuf> pufs,
                     const BitString& challenge,
                     const EnvironmentConditions& env, Rng* noise);

class RoPuf {
 public:
  static constexpr double kFrequencySpreadHz = 1.0e6;
  static constexpr double kDefaultMeasSigmaHz = 1.0e5;

  static RoPuf create(std::size_t m_oscillators, std::uint64_t seed,
                      double meas_sigma = kDefaultMeasSigmaHz);
  static RoPuf from_frequencies(std::vector<double> frequencies,
                                double meas_sigma);

  std::size_t size() const { return frequencies_.size(); }
  const std::vector<double>& frequencies() const { return frequencies_; }
  double meas_sigma() const { return meas_sigma_; }

 private:
  RoPuf(std::vector<double> frequencies, double meas_sigma);

  std::vector<double> frequencies_;
  double meas_sigma_;
};

// [f_i + e_i > f_j + e_j]; throws invalid-pair for i == j or out of range.
int ro_eval(const RoPuf& puf, std::size_t i, std::size_t j, Rng* noise);

// Per-power-up noise std as a function of temperature: piecewise linear
// through anchors at -40, 25 and 85 C. Voltage has no effect in range.
struct SramNoiseProfile {
  double sigma_cold = 0;     // -40 C
  double sigma_nominal = 0;  // 25 C
  double sigma_hot = 0;      // 85 C

  static SramNoiseProfile calibrated();  // 8% / 6% / 8% BER
  static SramNoiseProfile flat(double sigma) { return {sigma, sigma, sigma}; }
  double sigma_at(const EnvironmentConditions& env) const;
};

inline constexpr double kSramBerNominal = 0.06;
inline constexpr double kSramBerExtreme = 0.08;

class SramPuf {
 public:
  static SramPuf create(std::size_t n_cells, std::uint64_t seed,
                        SramNoiseProfile noise = SramNoiseProfile::calibrated());
  static SramPuf from_biases(std::vector<double> cell_bias,
                             SramNoiseProfile noise);

  std::size_t size() const { return bias_.size(); }
  const std::vector<double>& cell_bias() const { return bias_; }
  const SramNoiseProfile& noise() const { return noise_; }
  double noise_sigma(const EnvironmentConditions& env) const {
    return noise_.sigma_at(env);
  }
  // Zero-noise startup state, bit_i = [bias_i > 0].
  BitString reference_pattern() const;

 private:
  SramPuf(std::vector<double> bias, SramNoiseProfile noise);

  std::vector<double> bias_;
  SramNoiseProfile noise_;
};

BitString sram_startup(const SramPuf& puf, const EnvironmentConditions& env,
                       Rng* noise);

// sigma such that the population flip rate arctan(sigma) / pi == target_ber.
double calibrate_sram_noise(double target_ber);
// Inverse of the above: expected BER for noise sigma with N(0,1) biases.
double sram_expected_ber(double sigma);

// ResponseDevice adapters over the classic models.

class ArbiterDevice final : public ResponseDevice {
 public:
  explicit ArbiterDevice(ArbiterPuf puf) : puf_(std::move(puf)) {}
  std::string model() const override { return "arbiter"; }
  std::size_t challenge_bits() const override { return puf_.n_stages(); }
  std::size_t response_bits() const override { return 1; }
  BitString respond(const BitString& challenge, const EnvironmentConditions& env,
                    Rng* noise) const override;
  const ArbiterPuf& puf() const { return puf_; }

 private:
  ArbiterPuf puf_;
};

class XorArbiterDevice final : public ResponseDevice {
 public:
  explicit XorArbiterDevice(std::vector<ArbiterPuf> pufs);
  std::string model() const override { return "xor-arbiter"; }
  std::size_t challenge_bits() const override { return pufs_.front().n_stages(); }
  std::size_t response_bits() const override { return 1; }
  BitString respond(const BitString& challenge, const EnvironmentConditions& env,
                    Rng* noise) const override;
  const std::vector<ArbiterPuf>& pufs() const { return pufs_; }

 private:
  std::vector<ArbiterPuf> pufs_;
};

// Response bit k compares oscillators (2k, 2k+1); the challenge is ignored.
class RoDevice final : public ResponseDevice {
 public:
  explicit RoDevice(RoPuf puf) : puf_(std::move(puf)) {}
  std::string model() const override { return "ro"; }
  std::size_t challenge_bits() const override { return 0; }
  std::size_t response_bits() const override { return puf_.size() / 2; }
  BitString respond(const BitString& challenge, const EnvironmentConditions& env,
                    Rng* noise) const override;

 private:
  RoPuf puf_;
};

class SramDevice final : public ResponseDevice {
 public:
  explicit SramDevice(SramPuf puf) : puf_(std::move(puf)) {}
  std::string model() const override { return "sram"; }
  std::size_t challenge_bits() const override { return 0; }
  std::size_t response_bits() const override { return puf_.size(); }
  BitString respond(const BitString& challenge, const EnvironmentConditions& env,
                    Rng* noise) const override;
  const SramPuf& puf() const { return puf_; }

 private:
  SramPuf puf_;
};

// JSON {model, params, seed}: everything needed to rebuild a device.
struct DeviceDescriptor {
  std::string model;  // arbiter | xor-arbiter | ro | sram
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const DeviceDescriptor& d);
void from_json(const nlohmann::json& j, DeviceDescriptor& d);

// Throws invalid-parameter on an unknown model or bad params.
std::unique_ptr<ResponseDevice> make_device(const DeviceDescriptor& descriptor);

}  // namespace clonebench
