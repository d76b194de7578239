// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/acoustic.hpp"

#include <algorithm>
#include <cmath>

#include "clonebench/error.hpp"
#include "clonebench/serialization.hpp"

namespace clonebench {
namespace {

std::complex<double> complex_normal(Rng& rng) {
  // E|z|^2 = 1
  return {rng.normal() * M_SQRT1_2, rng.normal() * M_SQRT1_2};
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  return (hi + *std::max_element(v.begin(), v.begin() + n / 2)) / 2;
}

}  // namespace

StructureModel StructureModel::create(std::uint64_t seed, std::size_t n_bins,
                                      double smoothing, StructureOptions options) {
  require(n_bins >= 32, ErrorCode::kInvalidParameter, "n_bins must be >= 32");
  require(smoothing >= 0 && smoothing < 1, ErrorCode::kInvalidParameter,
          "smoothing must lie in [0, 1)");
  require(options.meas_noise_sigma >= 0, ErrorCode::kInvalidParameter,
          "meas_noise_sigma must be >= 0");
  require(options.f_max_hz > options.f_min_hz, ErrorCode::kInvalidParameter,
          "frequency grid must be increasing");
  Rng rng = Rng(seed).split("acoustic.structure");
  const double fresh = std::sqrt(1.0 - smoothing * smoothing);
  std::vector<std::complex<double>> h(n_bins);
  h[0] = complex_normal(rng);
  for (std::size_t i = 1; i < n_bins; ++i) {
    h[i] = smoothing * h[i - 1] + fresh * complex_normal(rng);
  }
  return StructureModel(std::move(h), smoothing, options);
}

double StructureModel::bin_frequency_hz(std::size_t bin) const {
  const double step = (options_.f_max_hz - options_.f_min_hz) /
                      static_cast<double>(n_bins() - 1);
  return options_.f_min_hz + step * static_cast<double>(bin);
}

double StructureModel::gain(const EnvironmentConditions& env) const {
  env.validate();
  return (1.0 + options_.temp_coeff * (env.temperature_c - 25.0)) *
         (1.0 + options_.gain_drift);
}

void WaveTrain::validate() const {
  require(t >= 2 && k >= 1, ErrorCode::kInvalidParameter,
          "wave train needs t >= 2 and k >= 1");
  require(slots.size() == k, ErrorCode::kInvalidParameter,
          "wave train must have exactly k slots");
  for (auto f : slots) {
    require(f < t, ErrorCode::kInvalidChallenge, "slot frequency index >= t");
  }
}

WaveTrain WaveTrain::random(std::size_t t, std::size_t k, Rng& rng) {
  WaveTrain w{t, k, std::vector<std::size_t>(k)};
  for (auto& f : w.slots) f = rng.uniform_index(t);
  w.validate();
  return w;
}

std::vector<std::complex<double>> stimulate(const StructureModel& s,
                                            const WaveTrain& w,
                                            const EnvironmentConditions& env,
                                            Rng* noise) {
  w.validate();
  require(w.t <= s.n_bins(), ErrorCode::kInvalidChallenge,
          "wave train has more frequencies than the bin grid");
  const std::size_t stride = s.n_bins() / w.t;
  const double g = s.gain(env);
  const double sigma = s.options().meas_noise_sigma;
  std::vector<std::complex<double>> y(w.k);
  for (std::size_t j = 0; j < w.k; ++j) {
    y[j] = s.response()[w.slots[j] * stride] * g;
    if (noise != nullptr && sigma > 0) y[j] += sigma * complex_normal(*noise);
  }
  return y;
}

double rayleigh_median() { return std::sqrt(std::log(2.0)); }

std::vector<double> population_thresholds(std::span<const StructureModel> reference) {
  require(!reference.empty(), ErrorCode::kInsufficientPopulation,
          "reference population is empty");
  const std::size_t n = reference.front().n_bins();
  std::vector<double> out(n);
  std::vector<double> column(reference.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < reference.size(); ++d) {
      require(reference[d].n_bins() == n, ErrorCode::kInvalidParameter,
              "reference population mixes bin counts");
      column[d] = std::abs(reference[d].response()[i]);
    }
    out[i] = median_of(column);
  }
  return out;
}

Fingerprint fingerprint(const StructureModel& s, const EnvironmentConditions& env,
                        Rng* noise, std::optional<std::vector<double>> thresholds) {
  const std::size_t n = s.n_bins();
  Fingerprint fp;
  fp.thresholds = thresholds ? std::move(*thresholds)
                             : std::vector<double>(n, rayleigh_median());
  require(fp.thresholds.size() == n, ErrorCode::kInvalidParameter,
          "need one threshold per bin");
  const double g = s.gain(env);
  const double sigma = s.options().meas_noise_sigma;
  fp.bits = BitString(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> m = s.response()[i] * g;
    if (noise != nullptr && sigma > 0) m += sigma * complex_normal(*noise);
    fp.bits.set(i, std::abs(m) > fp.thresholds[i]);
  }
  return fp;
}

namespace {

// Exact C(k, p) while it fits in 128 bits; log-gamma beyond.
double log2_binomial(std::size_t k, std::size_t p) {
  p = std::min(p, k - p);
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= p; ++i) {
    const unsigned __int128 limit = ~static_cast<unsigned __int128>(0) / (k - p + i);
    if (c > limit) {
      return (std::lgamma(k + 1.0) - std::lgamma(p + 1.0) - std::lgamma(k - p + 1.0)) /
             std::log(2.0);
    }
    c = c * (k - p + i) / i;  // exact: C(k-p+i, i) is an integer at every step
  }
  const auto hi = static_cast<std::uint64_t>(c >> 64);
  const auto lo = static_cast<std::uint64_t>(c);
  return std::log2(std::ldexp(static_cast<double>(hi), 64) + static_cast<double>(lo));
}

}  // namespace

ChallengeSpace challenge_space_bits(const ChallengeSpaceSpec& spec) {
  require(spec.t >= 2, ErrorCode::kInvalidParameter, "t must be >= 2");
  require(spec.k >= 1, ErrorCode::kInvalidParameter, "k must be >= 1");
  const double per_slot = std::log2(static_cast<double>(spec.t));
  ChallengeSpace out;
  if (!spec.p) {
    out.bits = static_cast<double>(spec.k) * per_slot;
    return out;
  }
  const std::size_t p = *spec.p;
  require(p >= 1 && p <= spec.k, ErrorCode::kInvalidParameter,
          "p must satisfy 1 <= p <= k");
  out.bits = log2_binomial(spec.k, p) + static_cast<double>(p) * per_slot;
  out.note = "sparse occupancy counted as C(k,p) slot choices times t^p frequency "
             "assignments";
  if (spec.t == 32 && spec.k == 20 && p == 10) {
    out.note += "; this differs from the 2^65 value quoted for t=32, k=20, p=10, "
                "which no combinatorial reading reproduces";
  }
  return out;
}

EntropyEstimate estimate_degrees_of_freedom(std::span<const BitString> population) {
  require(population.size() >= 2, ErrorCode::kInsufficientPopulation,
          "need at least two members");
  const std::size_t n = population.front().size();
  for (const auto& b : population) {
    require(b.size() == n && n > 0, ErrorCode::kInvalidInput,
            "population members must have equal non-zero length");
  }
  EntropyEstimate e;
  double sum = 0;
  double sum_sq = 0;
  for (std::size_t a = 0; a < population.size(); ++a) {
    for (std::size_t b = a + 1; b < population.size(); ++b) {
      const std::size_t hd = hamming_distance(population[a], population[b]);
      if (hd == 0) ++e.duplicate_pairs;
      const double f = static_cast<double>(hd) / static_cast<double>(n);
      sum += f;
      sum_sq += f * f;
      ++e.n_pairs;
    }
  }
  const double pairs = static_cast<double>(e.n_pairs);
  e.mean_hd = sum / pairs;
  e.variance = std::max(0.0, sum_sq / pairs - e.mean_hd * e.mean_hd);
  e.degenerate = e.duplicate_pairs > 0 || e.variance == 0;
  e.dof_bits = e.variance > 0 ? e.mean_hd * (1 - e.mean_hd) / e.variance : 0.0;
  return e;
}

EntropyEstimate structural_entropy_estimate(std::span<const Fingerprint> population) {
  require(population.size() >= kMinEntropyPopulation,
          ErrorCode::kInsufficientPopulation, "need at least 100 fingerprints");
  std::vector<BitString> bits;
  bits.reserve(population.size());
  for (const auto& f : population) bits.push_back(f.bits);
  return estimate_degrees_of_freedom(bits);
}

void to_json(nlohmann::json& j, const Fingerprint& f) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"device_id", f.device_id},
                     {"n_bins", f.bits.size()},
                     {"bits_hex", f.bits.to_hex()},
                     {"thresholds", f.thresholds}};
}

void from_json(const nlohmann::json& j, Fingerprint& f) {
  check_schema_version(j);
  const auto n = j.at("n_bins").get<std::size_t>();
  f.device_id = j.value("device_id", std::string());
  f.bits = BitString::from_hex(j.at("bits_hex").get<std::string>(), n);
  f.thresholds = j.at("thresholds").get<std::vector<double>>();
  require(f.thresholds.size() == n, ErrorCode::kDataError,
          "fingerprint needs one threshold per bin");
}

void to_json(nlohmann::json& j, const WaveTrain& w) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"t", w.t}, {"k", w.k}, {"slots", w.slots}};
}

void from_json(const nlohmann::json& j, WaveTrain& w) {
  check_schema_version(j);
  j.at("t").get_to(w.t);
  j.at("k").get_to(w.k);
  j.at("slots").get_to(w.slots);
  w.validate();
}

void to_json(nlohmann::json& j, const EntropyEstimate& e) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"mean_hd", e.mean_hd},
                     {"variance", e.variance},
                     {"dof_bits", e.dof_bits},
                     {"n_pairs", e.n_pairs},
                     {"duplicate_pairs", e.duplicate_pairs},
                     {"degenerate", e.degenerate}};
}

}  // namespace clonebench
