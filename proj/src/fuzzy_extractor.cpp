// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/fuzzy_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/crc.hpp>

#include "clonebench/error.hpp"
#include "clonebench/serialization.hpp"

namespace clonebench {

void RepetitionParams::validate() const {
  require(n_rep >= 1 && n_rep % 2 == 1, ErrorCode::kInvalidParameter,
          "n_rep must be odd and >= 1");
  require(n_blocks >= 1, ErrorCode::kInvalidParameter, "n_blocks must be >= 1");
}

double repetition_block_failure(std::size_t n_rep, double ber) {
  require(ber >= 0 && ber <= 1, ErrorCode::kInvalidParameter,
          "ber must lie in [0, 1]");
  if (ber == 0) return 0.0;
  if (ber == 1) return 1.0;
  const double n = static_cast<double>(n_rep);
  const double lp = std::log(ber);
  const double lq = std::log1p(-ber);
  std::vector<double> logs;
  for (std::size_t k = n_rep / 2 + 1; k <= n_rep; ++k) {
    const double kk = static_cast<double>(k);
    logs.push_back(std::lgamma(n + 1) - std::lgamma(kk + 1) -
                   std::lgamma(n - kk + 1) + kk * lp + (n - kk) * lq);
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  double sum = 0;
  for (double l : logs) sum += std::exp(l - peak);
  return std::exp(peak) * sum;
}

RepetitionParams design_repetition(double ber, double fail_target,
                                   std::size_t n_blocks) {
  require(ber >= 0 && ber < 0.5, ErrorCode::kInvalidParameter,
          "ber must lie in [0, 0.5)");
  require(fail_target > 0 && fail_target < 1, ErrorCode::kInvalidParameter,
          "fail_target must lie in (0, 1)");
  require(n_blocks >= 1, ErrorCode::kInvalidParameter, "n_blocks must be >= 1");
  for (std::size_t n = 1; n <= 1023; n += 2) {
    const double total = static_cast<double>(n_blocks) *
                         repetition_block_failure(n, ber);
    if (total <= fail_target) return {n, n_blocks, ber, fail_target};
  }
  fail(ErrorCode::kInfeasibleDesign,
       "no repetition length <= 1023 meets the failure target");
}

BitString repetition_encode(const BitString& message, std::size_t n_rep) {
  BitString out(message.size() * n_rep);
  for (std::size_t b = 0; b < message.size(); ++b) {
    if (!message.get(b)) continue;
    for (std::size_t k = 0; k < n_rep; ++k) out.set(b * n_rep + k, true);
  }
  return out;
}

BitString repetition_decode(const BitString& received, std::size_t n_rep) {
  require(n_rep % 2 == 1 && received.size() % n_rep == 0,
          ErrorCode::kInvalidInput, "received length must be a multiple of odd n_rep");
  BitString out(received.size() / n_rep);
  for (std::size_t b = 0; b < out.size(); ++b) {
    out.set(b, received.slice(b * n_rep, n_rep).popcount() > n_rep / 2);
  }
  return out;
}

BitString toeplitz_hash(const BitString& seed, const BitString& input,
                        std::size_t out_len) {
  require(!input.empty() && out_len >= 1, ErrorCode::kInvalidParameter,
          "toeplitz input and output must be non-empty");
  require(seed.size() == input.size() + out_len - 1,
          ErrorCode::kInvalidParameter, "toeplitz seed must be |input| + out_len - 1 bits");
  // With the seed reversed, row i is the window rev[out_len - 1 - i, ...).
  const std::size_t s = seed.size();
  BitString rev(s);
  for (std::size_t k = 0; k < s; ++k) rev.set(k, seed.get(s - 1 - k));
  BitString out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    out.set(i, input.dot_window(rev, out_len - 1 - i));
  }
  return out;
}

void HelperData::validate() const {
  require(n_rep >= 1 && n_rep % 2 == 1 && n_blocks >= 1,
          ErrorCode::kInvalidInput, "helper data has invalid code parameters");
  require(sketch.size() == n_rep * n_blocks, ErrorCode::kInvalidInput,
          "sketch length must be n_rep * n_blocks");
  require(key_len >= 1 && toeplitz_seed.size() == sketch.size() + key_len - 1,
          ErrorCode::kInvalidInput, "toeplitz seed length mismatch");
}

std::uint32_t reading_checksum(const BitString& w) {
  boost::crc_32_type crc;
  for (std::size_t i = 0; i < w.size(); i += 8) {
    unsigned char byte = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      byte = static_cast<unsigned char>(byte << 1);
      if (i + b < w.size() && w.get(i + b)) byte |= 1;
    }
    crc.process_byte(byte);
  }
  return crc.checksum();
}

std::pair<ExtractedKey, HelperData> fe_generate(
    const BitString& w, const RepetitionParams& params, std::size_t key_len,
    Rng& rng, std::optional<BitString> seed_override) {
  params.validate();
  require(w.size() == params.codeword_bits(), ErrorCode::kInvalidInput,
          "reading length must equal n_rep * n_blocks");
  require(key_len >= 1, ErrorCode::kInvalidParameter, "key_len must be >= 1");

  const BitString r = rng.bits(params.n_blocks);
  HelperData helper;
  helper.sketch = w ^ repetition_encode(r, params.n_rep);
  helper.toeplitz_seed = seed_override ? std::move(*seed_override)
                                       : rng.bits(w.size() + key_len - 1);
  helper.key_len = key_len;
  helper.n_rep = params.n_rep;
  helper.n_blocks = params.n_blocks;
  helper.checksum = reading_checksum(w);
  helper.validate();

  ExtractedKey key{toeplitz_hash(helper.toeplitz_seed, w, key_len)};
  return {std::move(key), std::move(helper)};
}

Reproduction fe_reproduce_detailed(const BitString& w_noisy,
                                   const HelperData& helper) {
  helper.validate();
  require(w_noisy.size() == helper.sketch.size(), ErrorCode::kInvalidInput,
          "reading length must equal sketch length");
  const BitString r = repetition_decode(w_noisy ^ helper.sketch, helper.n_rep);
  const BitString w = helper.sketch ^ repetition_encode(r, helper.n_rep);
  Reproduction out;
  out.corrected_bits = hamming_distance(w, w_noisy);
  if (reading_checksum(w) == helper.checksum) {
    out.key = ExtractedKey{toeplitz_hash(helper.toeplitz_seed, w, helper.key_len)};
  }
  return out;
}

std::optional<ExtractedKey> fe_reproduce(const BitString& w_noisy,
                                         const HelperData& helper) {
  return fe_reproduce_detailed(w_noisy, helper).key;
}

double code_offset_leak_bits(std::size_t n_rep, std::size_t n_blocks) {
  return static_cast<double>(n_blocks * (n_rep - 1));
}

std::size_t entropy_accounting(double minentropy_in, double leak_bits,
                               double epsilon) {
  require(minentropy_in > 0, ErrorCode::kInvalidParameter,
          "min-entropy must be positive");
  require(epsilon > 0 && epsilon <= 1, ErrorCode::kInvalidParameter,
          "epsilon must lie in (0, 1]");
  const double left = std::floor(minentropy_in - leak_bits -
                                 2.0 * std::log2(1.0 / epsilon));
  return left > 0 ? static_cast<std::size_t>(left) : 0;
}

void to_json(nlohmann::json& j, const HelperData& h) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"sketch_hex", h.sketch.to_hex()},
                     {"seed_hex", h.toeplitz_seed.to_hex()},
                     {"key_len", h.key_len},
                     {"n_rep", h.n_rep},
                     {"n_blocks", h.n_blocks},
                     {"checksum_hex", u32_to_hex(h.checksum)}};
}

void from_json(const nlohmann::json& j, HelperData& h) {
  check_schema_version(j);
  h.n_rep = j.at("n_rep").get<std::size_t>();
  h.n_blocks = j.at("n_blocks").get<std::size_t>();
  h.key_len = j.at("key_len").get<std::size_t>();
  const std::size_t n = h.n_rep * h.n_blocks;
  h.sketch = BitString::from_hex(j.at("sketch_hex").get<std::string>(), n);
  h.toeplitz_seed = BitString::from_hex(j.at("seed_hex").get<std::string>(),
                                        n + h.key_len - 1);
  h.checksum = hex_to_u32(j.at("checksum_hex").get<std::string>());
  h.validate();
}

void to_json(nlohmann::json& j, const RepetitionParams& p) {
  j = nlohmann::json{{"n_rep", p.n_rep},
                     {"n_blocks", p.n_blocks},
                     {"design_ber", p.design_ber},
                     {"fail_target", p.fail_target},
                     {"block_failure", repetition_block_failure(p.n_rep, p.design_ber)}};
}

}  // namespace clonebench
