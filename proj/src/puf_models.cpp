// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/puf_models.hpp"

#include <cmath>
#include <numbers>

#include "clonebench/error.hpp"

namespace clonebench {

void EnvironmentConditions::validate() const {
  require(temperature_c >= kMinTemperature && temperature_c <= kMaxTemperature,
          ErrorCode::kInvalidParameter, "temperature outside [-40, 85] C");
  require(voltage_v >= kMinVoltage && voltage_v <= kMaxVoltage,
          ErrorCode::kInvalidParameter, "voltage outside [1.20, 1.32] V");
}

// ---------------------------------------------------------------------------
// Arbiter

namespace {

// Linear reduction of stage delays. With delta_i = top_i - bottom_i and
// s_i = 1 - 2 c_i, each stage gives delta_i = s_i delta_{i-1} + d_i(c_i),
// where d_i(0) = a_i = straight_top - straight_bottom and
// d_i(1) = b_i = cross_to_top - cross_to_bottom. Unrolling yields
// delta_n = sum_i phi_i u_i + phi_{i+1} v_i with u = (a-b)/2, v = (a+b)/2.
std::vector<double> reduce_delays(const std::vector<StageDelays>& delays) {
  const std::size_t n = delays.size();
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = delays[i].straight_top - delays[i].straight_bottom;
    const double b = delays[i].cross_to_top - delays[i].cross_to_bottom;
    w[i] += (a - b) / 2;
    w[i + 1] += (a + b) / 2;
  }
  return w;
}

}  // namespace

ArbiterPuf::ArbiterPuf(std::vector<StageDelays> delays, double noise_sigma)
    : delays_(std::move(delays)),
      weights_(reduce_delays(delays_)),
      noise_sigma_(noise_sigma) {
  require(!delays_.empty(), ErrorCode::kInvalidParameter, "n_stages must be >= 1");
  require(noise_sigma_ >= 0, ErrorCode::kInvalidParameter,
          "noise_sigma must be >= 0");
}

ArbiterPuf ArbiterPuf::create(std::size_t n_stages, std::uint64_t seed,
                              double noise_sigma) {
  require(n_stages >= 1, ErrorCode::kInvalidParameter, "n_stages must be >= 1");
  Rng rng = Rng(seed).split("arbiter.delays");
  std::vector<StageDelays> delays(n_stages);
  for (auto& d : delays) {
    d.straight_top = rng.normal();
    d.straight_bottom = rng.normal();
    d.cross_to_top = rng.normal();
    d.cross_to_bottom = rng.normal();
  }
  return ArbiterPuf(std::move(delays), noise_sigma);
}

ArbiterPuf ArbiterPuf::from_delays(std::vector<StageDelays> delays,
                                   double noise_sigma) {
  return ArbiterPuf(std::move(delays), noise_sigma);
}

ArbiterPuf ArbiterPuf::from_weights(std::span<const double> weights,
                                    double noise_sigma) {
  require(weights.size() >= 2, ErrorCode::kInvalidParameter,
          "weights need n_stages + 1 >= 2 entries");
  const std::size_t n = weights.size() - 1;
  // u_0 = w_0, u_i = w_i (v_{i-1} = 0) for 0 < i < n, v_{n-1} = w_n.
  std::vector<StageDelays> delays(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = weights[i];
    const double v = i + 1 == n ? weights[n] : 0.0;
    delays[i].straight_top = u + v;    // a = u + v
    delays[i].cross_to_top = v - u;    // b = v - u
  }
  return ArbiterPuf(std::move(delays), noise_sigma);
}

double ArbiterPuf::challenge_space_size() const {
  return std::ldexp(1.0, static_cast<int>(n_stages()));
}

void parity_features(const BitString& challenge, std::span<double> out) {
  const std::size_t n = challenge.size();
  require(out.size() == n + 1, ErrorCode::kInvalidParameter,
          "feature buffer must hold n + 1 values");
  out[n] = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    out[i] = challenge.get(i) ? -out[i + 1] : out[i + 1];
  }
}

std::vector<double> parity_features(const BitString& challenge) {
  std::vector<double> phi(challenge.size() + 1);
  parity_features(challenge, phi);
  return phi;
}

double arbiter_env_scale(const EnvironmentConditions& env) {
  return 1.0 + 0.01 * std::abs(env.temperature_c - 25.0);
}

int arbiter_eval(const ArbiterPuf& puf, const BitString& challenge,
                 const EnvironmentConditions& env, Rng* noise) {
  require(challenge.size() == puf.n_stages(), ErrorCode::kInvalidChallenge,
          "challenge length must equal n_stages");
  env.validate();
  const auto& w = puf.weights();
  const std::size_t n = puf.n_stages();
  double phi = 1.0;
  double delta = w[n];
  for (std::size_t i = n; i-- > 0;) {
    if (challenge.get(i)) phi = -phi;
    delta += w[i] * phi;
  }
  if (noise != nullptr && puf.noise_sigma() > 0) {
    delta += noise->normal() * puf.noise_sigma() * arbiter_env_scale(env);
  }
  return delta > 0 ? 1 : 0;
}

int xor_arbiter_eval(std::span<const ArbiterPuf> pufs,
                     const BitString& challenge,
                     const EnvironmentConditions& env, Rng* noise) {
  require(!pufs.empty(), ErrorCode::kInvalidParameter,
          "xor arbiter needs at least one PUF");
  int r = 0;
  for (const auto& p : pufs) r ^= arbiter_eval(p, challenge, env, noise);
  return r;
}

// ---------------------------------------------------------------------------
// Ring oscillator

RoPuf::RoPuf(std::vector<double> frequencies, double meas_sigma)
    : frequencies_(std::move(frequencies)), meas_sigma_(meas_sigma) {
  require(frequencies_.size() >= 2, ErrorCode::kInvalidParameter,
          "need at least two oscillators");
  require(meas_sigma_ >= 0, ErrorCode::kInvalidParameter,
          "meas_sigma must be >= 0");
}

RoPuf RoPuf::create(std::size_t m_oscillators, std::uint64_t seed,
                    double meas_sigma) {
  require(m_oscillators >= 2, ErrorCode::kInvalidParameter,
          "need at least two oscillators");
  Rng rng = Rng(seed).split("ro.frequencies");
  std::vector<double> f(m_oscillators);
  for (auto& x : f) x = rng.normal() * kFrequencySpreadHz;
  return RoPuf(std::move(f), meas_sigma);
}

RoPuf RoPuf::from_frequencies(std::vector<double> frequencies,
                              double meas_sigma) {
  return RoPuf(std::move(frequencies), meas_sigma);
}

int ro_eval(const RoPuf& puf, std::size_t i, std::size_t j, Rng* noise) {
  require(i != j, ErrorCode::kInvalidPair, "oscillator pair must be distinct");
  require(i < puf.size() && j < puf.size(), ErrorCode::kInvalidPair,
          "oscillator index out of range");
  double fi = puf.frequencies()[i];
  double fj = puf.frequencies()[j];
  if (noise != nullptr && puf.meas_sigma() > 0) {
    fi += noise->normal() * puf.meas_sigma();
    fj += noise->normal() * puf.meas_sigma();
  }
  return fi > fj ? 1 : 0;
}

// ---------------------------------------------------------------------------
// SRAM

double calibrate_sram_noise(double target_ber) {
  require(target_ber > 0 && target_ber < 0.5, ErrorCode::kInvalidParameter,
          "target BER must lie in (0, 0.5)");
  return std::tan(std::numbers::pi * target_ber);
}

double sram_expected_ber(double sigma) {
  return std::atan(sigma) / std::numbers::pi;
}

SramNoiseProfile SramNoiseProfile::calibrated() {
  return {calibrate_sram_noise(kSramBerExtreme),
          calibrate_sram_noise(kSramBerNominal),
          calibrate_sram_noise(kSramBerExtreme)};
}

double SramNoiseProfile::sigma_at(const EnvironmentConditions& env) const {
  env.validate();
  const double t = env.temperature_c;
  if (t <= 25.0) {
    const double f = (t - EnvironmentConditions::kMinTemperature) / 65.0;
    return sigma_cold + f * (sigma_nominal - sigma_cold);
  }
  const double f = (t - 25.0) / 60.0;
  return sigma_nominal + f * (sigma_hot - sigma_nominal);
}

SramPuf::SramPuf(std::vector<double> bias, SramNoiseProfile noise)
    : bias_(std::move(bias)), noise_(noise) {
  require(!bias_.empty(), ErrorCode::kInvalidParameter, "n_cells must be >= 1");
  require(noise_.sigma_cold >= 0 && noise_.sigma_nominal >= 0 &&
              noise_.sigma_hot >= 0,
          ErrorCode::kInvalidParameter, "noise sigmas must be >= 0");
}

SramPuf SramPuf::create(std::size_t n_cells, std::uint64_t seed,
                        SramNoiseProfile noise) {
  require(n_cells >= 1, ErrorCode::kInvalidParameter, "n_cells must be >= 1");
  Rng rng = Rng(seed).split("sram.bias");
  std::vector<double> bias(n_cells);
  for (auto& b : bias) b = rng.normal();
  return SramPuf(std::move(bias), noise);
}

SramPuf SramPuf::from_biases(std::vector<double> cell_bias,
                             SramNoiseProfile noise) {
  return SramPuf(std::move(cell_bias), noise);
}

BitString SramPuf::reference_pattern() const {
  BitString out(bias_.size());
  for (std::size_t i = 0; i < bias_.size(); ++i) out.set(i, bias_[i] > 0);
  return out;
}

BitString sram_startup(const SramPuf& puf, const EnvironmentConditions& env,
                       Rng* noise) {
  const double sigma = puf.noise_sigma(env);
  const auto& bias = puf.cell_bias();
  BitString out(bias.size());
  const bool noisy = noise != nullptr && sigma > 0;
  for (std::size_t i = 0; i < bias.size(); ++i) {
    const double e = noisy ? noise->normal() * sigma : 0.0;
    out.set(i, bias[i] + e > 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Adapters

BitString ArbiterDevice::respond(const BitString& challenge,
                                 const EnvironmentConditions& env,
                                 Rng* noise) const {
  BitString r(1);
  r.set(0, arbiter_eval(puf_, challenge, env, noise));
  return r;
}

XorArbiterDevice::XorArbiterDevice(std::vector<ArbiterPuf> pufs)
    : pufs_(std::move(pufs)) {
  require(!pufs_.empty(), ErrorCode::kInvalidParameter,
          "xor arbiter needs at least one PUF");
  for (const auto& p : pufs_) {
    require(p.n_stages() == pufs_.front().n_stages(),
            ErrorCode::kInvalidParameter, "xor arbiter stage counts differ");
  }
}

BitString XorArbiterDevice::respond(const BitString& challenge,
                                    const EnvironmentConditions& env,
                                    Rng* noise) const {
  BitString r(1);
  r.set(0, xor_arbiter_eval(pufs_, challenge, env, noise));
  return r;
}

BitString RoDevice::respond(const BitString&, const EnvironmentConditions& env,
                            Rng* noise) const {
  env.validate();
  BitString r(response_bits());
  for (std::size_t k = 0; k < r.size(); ++k) {
    r.set(k, ro_eval(puf_, 2 * k, 2 * k + 1, noise));
  }
  return r;
}

BitString SramDevice::respond(const BitString&, const EnvironmentConditions& env,
                              Rng* noise) const {
  return sram_startup(puf_, env, noise);
}

// ---------------------------------------------------------------------------
// Descriptors

void to_json(nlohmann::json& j, const DeviceDescriptor& d) {
  j = nlohmann::json{{"model", d.model}, {"params", d.params}, {"seed", d.seed}};
}

void from_json(const nlohmann::json& j, DeviceDescriptor& d) {
  j.at("model").get_to(d.model);
  d.params = j.value("params", nlohmann::json::object());
  j.at("seed").get_to(d.seed);
}

namespace {

std::size_t param_count(const nlohmann::json& p, const char* key,
                        std::size_t fallback) {
  if (!p.contains(key)) return fallback;
  const auto& v = p.at(key);
  require(v.is_number_integer() && v.get<std::int64_t>() >= 0, ErrorCode::kInvalidParameter,
          std::string(key) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

double param_real(const nlohmann::json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  require(p.at(key).is_number(), ErrorCode::kInvalidParameter,
          std::string(key) + " must be a number");
  return p.at(key).get<double>();
}

}  // namespace

std::unique_ptr<ResponseDevice> make_device(const DeviceDescriptor& d) {
  const auto& p = d.params;
  if (d.model == "arbiter") {
    return std::make_unique<ArbiterDevice>(ArbiterPuf::create(
        param_count(p, "n_stages", 64), d.seed,
        param_real(p, "noise_sigma", ArbiterPuf::kDefaultNoiseSigma)));
  }
  if (d.model == "xor-arbiter") {
    const std::size_t k = param_count(p, "k", 2);
    require(k >= 1, ErrorCode::kInvalidParameter, "k must be >= 1");
    const std::size_t n = param_count(p, "n_stages", 64);
    const double sigma = param_real(p, "noise_sigma", ArbiterPuf::kDefaultNoiseSigma);
    std::vector<ArbiterPuf> pufs;
    for (std::size_t i = 0; i < k; ++i) {
      pufs.push_back(ArbiterPuf::create(n, Rng(d.seed).split(i).seed(), sigma));
    }
    return std::make_unique<XorArbiterDevice>(std::move(pufs));
  }
  if (d.model == "ro") {
    return std::make_unique<RoDevice>(RoPuf::create(
        param_count(p, "m_oscillators", 128), d.seed,
        param_real(p, "meas_sigma", RoPuf::kDefaultMeasSigmaHz)));
  }
  if (d.model == "sram") {
    SramNoiseProfile noise = SramNoiseProfile::calibrated();
    if (p.contains("noise_sigma")) noise = SramNoiseProfile::flat(param_real(p, "noise_sigma", 0));
    return std::make_unique<SramDevice>(
        SramPuf::create(param_count(p, "n_cells", 256), d.seed, noise));
  }
  fail(ErrorCode::kInvalidParameter, "unknown device model '" + d.model + "'");
}

}  // namespace clonebench
