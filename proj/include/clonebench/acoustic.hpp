// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonebench/bitstring.hpp"
#include "clonebench/device.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

// Synthetic structural identity: a random complex frequency response probed
// by ultrasonic wave trains, quantized into fingerprint bits.

struct StructureOptions {
  double temp_coeff = 1e-3;         // relative gain change per deg C
  double meas_noise_sigma = 0.05;   // complex noise, E|n|^2 = sigma^2
  double gain_drift = 0.0;          // aging; multiplies gain by (1 + drift)
  double f_min_hz = 30e3;
  double f_max_hz = 50e3;
};

class StructureModel {
 public:
  // H_0 ~ CN(0, 1); H_i = rho H_{i-1} + sqrt(1 - rho^2) CN(0, 1).
  static StructureModel create(std::uint64_t seed, std::size_t n_bins = 256,
                               double smoothing = 0.0,
                               StructureOptions options = {});

  std::size_t n_bins() const { return response_.size(); }
  double smoothing() const { return smoothing_; }
  const std::vector<std::complex<double>>& response() const { return response_; }
  const StructureOptions& options() const { return options_; }
  double bin_frequency_hz(std::size_t bin) const;
  double gain(const EnvironmentConditions& env) const;

 private:
  StructureModel(std::vector<std::complex<double>> h, double smoothing,
                 StructureOptions options)
      : response_(std::move(h)), smoothing_(smoothing), options_(options) {}

  std::vector<std::complex<double>> response_;
  double smoothing_;
  StructureOptions options_;
};

inline StructureModel structure_new(std::uint64_t seed, std::size_t n_bins = 256,
                                    double smoothing = 0.0,
                                    StructureOptions options = {}) {
  return StructureModel::create(seed, n_bins, smoothing, options);
}

// k slots, each carrying one of t stimulation frequencies.
struct WaveTrain {
  std::size_t t = 32;
  std::size_t k = 20;
  std::vector<std::size_t> slots;

  void validate() const;
  static WaveTrain random(std::size_t t, std::size_t k, Rng& rng);
};

// Frequency index f of a wave train maps to bin f * (n_bins / t).
std::vector<std::complex<double>> stimulate(const StructureModel& s,
                                            const WaveTrain& w,
                                            const EnvironmentConditions& env,
                                            Rng* noise);

struct Fingerprint {
  std::string device_id;
  BitString bits;
  std::vector<double> thresholds;  // public helper, one per bin
};

// Median |H| of a CN(0, 1) bin, sqrt(ln 2): the population median of every
// bin of the structure model.
double rayleigh_median();

// Per-bin medians of noiseless |H| over a reference population.
std::vector<double> population_thresholds(std::span<const StructureModel> reference);

// Full-grid impulse measurement, bit_i = [|measured H_i| > threshold_i].
// Thresholds default to rayleigh_median() in every bin.
Fingerprint fingerprint(const StructureModel& s, const EnvironmentConditions& env,
                        Rng* noise,
                        std::optional<std::vector<double>> thresholds = std::nullopt);

struct ChallengeSpaceSpec {
  std::size_t t = 32;
  std::size_t k = 20;
  std::optional<std::size_t> p;  // occupied slots
};

struct ChallengeSpace {
  double bits = 0;
  std::string note;  // empty unless there is something to flag
};

// k log2 t, or log2 C(k, p) + p log2 t when p is given. Throws
// invalid-parameter for t < 2, k < 1, p == 0 or p > k.
ChallengeSpace challenge_space_bits(const ChallengeSpaceSpec& spec);

struct EntropyEstimate {
  double mean_hd = 0;      // mean pairwise fractional Hamming distance
  double variance = 0;     // of the pairwise distances
  double dof_bits = 0;     // mean (1 - mean) / variance; 0 if degenerate
  std::size_t n_pairs = 0;
  std::size_t duplicate_pairs = 0;
  bool degenerate = false; // identical members or zero variance
};

// Binomial degrees-of-freedom fit to the pairwise-distance distribution of
// any equal-length bit-vector population (>= 2 members).
EntropyEstimate estimate_degrees_of_freedom(std::span<const BitString> population);

// Same estimator over fingerprints; needs >= 100 members.
EntropyEstimate structural_entropy_estimate(std::span<const Fingerprint> population);

inline constexpr std::size_t kMinEntropyPopulation = 100;

void to_json(nlohmann::json& j, const Fingerprint& f);
void from_json(const nlohmann::json& j, Fingerprint& f);
void to_json(nlohmann::json& j, const WaveTrain& w);
void from_json(const nlohmann::json& j, WaveTrain& w);
void to_json(nlohmann::json& j, const EntropyEstimate& e);

}  // namespace clonebench
