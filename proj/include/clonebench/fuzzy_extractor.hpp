// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "json.hpp"

#include "clonebench/bitstring.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

// Code-offset fuzzy extractor: repetition code for reconciliation, Toeplitz
// hashing for key extraction, and a CRC-32 of the enrolled reading so that
// reproduction can signal failure.

struct RepetitionParams {
  std::size_t n_rep = 1;     // odd
  std::size_t n_blocks = 1;
  double design_ber = 0;
  double fail_target = 0;

  std::size_t codeword_bits() const { return n_rep * n_blocks; }
  void validate() const;
};

// P[Bin(n_rep, ber) > n_rep / 2]: the chance that majority decoding of one
// block picks the wrong bit.
double repetition_block_failure(std::size_t n_rep, double ber);

// Smallest odd n_rep <= 1023 with n_blocks * block_failure <= fail_target.
RepetitionParams design_repetition(double ber, double fail_target,
                                   std::size_t n_blocks);

BitString repetition_encode(const BitString& message, std::size_t n_rep);
BitString repetition_decode(const BitString& received, std::size_t n_rep);

// GF(2) Toeplitz matrix-vector product:
//   out_i = XOR_j input_j & seed_{i + |input| - 1 - j},
// |seed| = |input| + out_len - 1.
BitString toeplitz_hash(const BitString& seed, const BitString& input,
                        std::size_t out_len);

struct HelperData {
  BitString sketch;         // w ^ encode(r)
  BitString toeplitz_seed;  // |w| + key_len - 1 bits
  std::size_t key_len = 0;
  std::size_t n_rep = 1;
  std::size_t n_blocks = 1;
  std::uint32_t checksum = 0;  // CRC-32 of w

  void validate() const;
};

struct ExtractedKey {
  BitString key;
  friend bool operator==(const ExtractedKey&, const ExtractedKey&) = default;
};

std::uint32_t reading_checksum(const BitString& w);

// seed_override pins the Toeplitz seed; otherwise it is drawn from rng.
std::pair<ExtractedKey, HelperData> fe_generate(
    const BitString& w, const RepetitionParams& params, std::size_t key_len,
    Rng& rng, std::optional<BitString> seed_override = std::nullopt);

struct Reproduction {
  std::optional<ExtractedKey> key;   // nullopt on checksum mismatch
  std::size_t corrected_bits = 0;    // HD(w_noisy, reconstructed w)
};

Reproduction fe_reproduce_detailed(const BitString& w_noisy,
                                   const HelperData& helper);
std::optional<ExtractedKey> fe_reproduce(const BitString& w_noisy,
                                         const HelperData& helper);

inline constexpr double kDefaultExtractorEpsilon = 0x1.0p-40;

// Information a code-offset sketch reveals: |sketch| - n_blocks.
double code_offset_leak_bits(std::size_t n_rep, std::size_t n_blocks);

// Leftover-hash bound: max(0, floor(h - leak - 2 log2(1 / epsilon))).
std::size_t entropy_accounting(double minentropy_in, double leak_bits,
                               double epsilon = kDefaultExtractorEpsilon);

void to_json(nlohmann::json& j, const HelperData& h);
void from_json(const nlohmann::json& j, HelperData& h);
void to_json(nlohmann::json& j, const RepetitionParams& p);

}  // namespace clonebench
