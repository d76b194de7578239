// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonebench/bitstring.hpp"
#include "clonebench/device.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

// Secret Unknown Cipher: a 64-bit substitution-permutation network whose
// S-boxes and key are drawn once, inside the device, by a generation stream
// that is consumed and dropped.

// Destination position of each state bit (bit 0 = least significant).
using BitPermutation = std::array<std::uint8_t, 64>;

// i -> 16 i mod 63 for i < 63, 63 -> 63.
BitPermutation present_permutation();
BitPermutation identity_permutation();
bool is_bijection(const BitPermutation& perm);

struct SucParams {
  std::size_t block_bits = 64;
  std::size_t nibbles = 16;
  std::size_t rounds = 40;
  std::size_t key_bits = 80;
  int sbox_ddt_max = 4;
  int sbox_walsh_max = 8;
  BitPermutation permutation = present_permutation();

  void validate() const;
};

class SBox {
 public:
  // Throws invalid-sbox unless `table` is a bijection on {0..15}.
  static SBox from_table(std::span<const std::uint8_t> table);

  std::uint8_t operator()(std::uint8_t x) const { return table_[x & 0xF]; }
  const std::array<std::uint8_t, 16>& table() const { return table_; }
  SBox inverse() const;

  friend bool operator==(const SBox&, const SBox&) = default;

 private:
  std::array<std::uint8_t, 16> table_{};
};

using DifferenceTable = std::array<std::array<int, 16>, 16>;

// ddt[a][b] = #{x : S(x ^ a) ^ S(x) = b}
DifferenceTable difference_table(const SBox& s);
// walsh[a][b] = sum_x (-1)^(a.x ^ b.S(x))
DifferenceTable walsh_table(const SBox& s);

struct SboxAudit {
  int ddt_max = 0;    // over a != 0
  int walsh_max = 0;  // |W(a, b)| over (a, b) != (0, 0)
};

SboxAudit sbox_audit(std::span<const std::uint8_t> table);
inline SboxAudit sbox_audit(const SBox& s) { return sbox_audit(s.table()); }
bool sbox_acceptable(const SBox& s, const SucParams& params);

// Uniformly random bijection on {0..15} (Fisher-Yates).
SBox random_bijection(Rng& rng);

class SucDevice {
 public:
  SucDevice(SucDevice&&) noexcept = default;
  SucDevice& operator=(SucDevice&&) noexcept = default;
  SucDevice(const SucDevice&) = delete;
  SucDevice& operator=(const SucDevice&) = delete;

  const std::string& device_id() const { return device_id_; }
  const SucParams& params() const { return params_; }

  std::uint64_t encrypt(std::uint64_t x) const;
  std::uint64_t decrypt(std::uint64_t y) const;

 private:
  friend class SucDeviceVault;
  friend SucDevice personalize(const SucParams&, Rng, std::string);

  SucDevice(SucParams params, std::string device_id, std::vector<SBox> sboxes,
            BitString master_key);

  std::uint64_t permute(std::uint64_t s) const;
  std::uint64_t unpermute(std::uint64_t s) const;

  SucParams params_;
  std::string device_id_;
  std::vector<SBox> sboxes_;
  BitString master_key_;
  std::vector<std::uint64_t> round_keys_;
  // Byte-wise lookup tables: two nibbles per entry, and the bit permutation
  // split into 8 byte lanes.
  std::vector<std::array<std::uint8_t, 256>> sub_, inv_sub_;
  std::array<std::array<std::uint64_t, 256>, 8> perm_{}, inv_perm_{};
};

// Draws `rounds` acceptable S-boxes by rejection sampling and an 80-bit
// master key from `trng`, which is consumed. Throws generation-failure after
// 10^6 rejected candidates for one S-box.
SucDevice personalize(const SucParams& params, Rng trng, std::string device_id);

inline constexpr std::size_t kSboxRejectionBudget = 1'000'000;

BitString suc_encrypt(const SucDevice& dev, const BitString& x);
BitString suc_decrypt(const SucDevice& dev, const BitString& y);

// 80-bit register, round key = top 64 bits, then rotate left by 61.
std::vector<std::uint64_t> expand_round_keys(const BitString& master_key,
                                             std::size_t rounds);

// The only path to a device's descriptor: device-file persistence and the
// unknownness audit. Nothing in the protocol or attack code links to it.
class SucDeviceVault {
 public:
  // {schema_version, device_id, params, descriptor, secret: true}
  static nlohmann::json save(const SucDevice& dev);
  static SucDevice load(const nlohmann::json& j);
  // Hex strings of every S-box table and of the master key.
  static std::vector<std::string> descriptor_fragments(const SucDevice& dev);
};

nlohmann::json params_to_json(const SucParams& p);
SucParams params_from_json(const nlohmann::json& j);

// Minimum number of active S-boxes over all `rounds`-round truncated
// (nibble-activity) trails with a nonzero start, by dynamic programming over
// the 2^16 activity patterns.
std::size_t min_active_sboxes(const BitPermutation& perm, std::size_t rounds);

// One random concrete differential trail: random nonzero input difference,
// each active nibble takes a random output difference allowed by that
// round's DDT. Returns the number of active S-boxes.
std::size_t sample_trail_active_sboxes(std::span<const SBox> round_sboxes,
                                       const BitPermutation& perm, Rng& rng);

struct SecurityReport {
  double cardinality_bits = 0;
  double sbox_entropy_bits = 0;     // H_sbox
  double sbox_acceptance_rate = 0;
  std::size_t sample_budget = 0;
  std::size_t min_active_sboxes = 0;
  double diff_complexity_log2 = 0;
  double lin_complexity_log2 = 0;
};

// Fraction of `samples` uniform bijections passing the acceptance thresholds.
double sbox_acceptance_rate(const SucParams& params, std::size_t samples,
                            Rng& rng);

// Throws insufficient-sampling for sample_budget < 10^3 or when no sampled
// bijection is acceptable.
SecurityReport security_report(const SucParams& params,
                               std::size_t sample_budget, Rng& rng);

void to_json(nlohmann::json& j, const SecurityReport& r);

// Forward-mode responder: 64-bit challenge -> ciphertext. Non-owning.
class SucResponder final : public ResponseDevice {
 public:
  explicit SucResponder(const SucDevice& dev) : dev_(&dev) {}
  std::string model() const override { return "suc"; }
  std::size_t challenge_bits() const override { return 64; }
  std::size_t response_bits() const override { return 64; }
  BitString respond(const BitString& challenge, const EnvironmentConditions& env,
                    Rng* noise) const override;

 private:
  const SucDevice* dev_;
};

}  // namespace clonebench
