// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "clonebench/acoustic.hpp"
#include "clonebench/bitstring.hpp"
#include "clonebench/device.hpp"
#include "clonebench/fuzzy_extractor.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

class SucDevice;

enum class CrpMode { kForward, kInverse };

std::string_view mode_name(CrpMode mode);
CrpMode parse_mode(std::string_view name);

struct CrpRecord {
  BitString challenge;
  BitString response;
  bool used = false;
};

// The trusted authority's single-use challenge-response pairs for one
// device. Holds no cipher descriptor. Record consumption is serialized by an
// internal mutex, so concurrent sessions never claim the same record.
class CrpStore {
 public:
  CrpStore(std::string device_id, CrpMode mode, std::size_t challenge_bits = 64,
           std::size_t response_bits = 64);

  const std::string& device_id() const { return device_id_; }
  CrpMode mode() const { return mode_; }
  std::size_t challenge_bits() const { return challenge_bits_; }
  std::size_t response_bits() const { return response_bits_; }

  std::size_t size() const;
  std::size_t unused_count() const;
  std::vector<CrpRecord> records() const;  // snapshot
  bool contains_challenge(const BitString& challenge) const;

  // All-or-nothing; throws invalid-input on duplicate challenges or wrong
  // lengths, leaving the store unchanged.
  void append(std::vector<CrpRecord> batch);

  // Marks the first unused record used and returns it.
  std::optional<CrpRecord> claim_next();

  enum class ClaimStatus { kClaimed, kAlreadyUsed, kUnknown };
  // Marks the record holding `challenge` used, reporting its prior state.
  ClaimStatus claim(const BitString& challenge, CrpRecord* out);

 private:
  std::string device_id_;
  CrpMode mode_;
  std::size_t challenge_bits_;
  std::size_t response_bits_;
  std::vector<CrpRecord> records_;
  std::size_t first_unused_ = 0;  // every record before it is used
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

// {schema_version, device_id, mode, challenge_bits, response_bits,
//  records: [{c_hex, r_hex, used}]}
nlohmann::json store_to_json(const CrpStore& store);
CrpStore store_from_json(const nlohmann::json& j);

// Transport failure as seen by the trusted authority.
class ChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// In-process message path between the trusted authority and a device agent.
class DeviceChannel {
 public:
  virtual ~DeviceChannel() = default;
  virtual std::size_t challenge_bits() const = 0;
  virtual BitString respond(const BitString& challenge) = 0;
  // Inverse mode: the device decrypts a stored response.
  virtual BitString invert(const BitString& response);
};

class SucChannel final : public DeviceChannel {
 public:
  explicit SucChannel(const SucDevice& dev) : dev_(&dev) {}
  std::size_t challenge_bits() const override { return 64; }
  BitString respond(const BitString& challenge) override;
  BitString invert(const BitString& response) override;

 private:
  const SucDevice* dev_;
};

// Noisy evaluation of any ResponseDevice at a fixed operating point.
class PufChannel final : public DeviceChannel {
 public:
  PufChannel(const ResponseDevice& device, EnvironmentConditions env, Rng noise)
      : device_(&device), env_(env), noise_(std::move(noise)) {}
  std::size_t challenge_bits() const override { return device_->challenge_bits(); }
  BitString respond(const BitString& challenge) override;

 private:
  const ResponseDevice* device_;
  EnvironmentConditions env_;
  Rng noise_;
};

// Answers every query with fresh uniform bits.
class ImpostorChannel final : public DeviceChannel {
 public:
  ImpostorChannel(Rng rng, std::size_t bits = 64) : rng_(std::move(rng)), bits_(bits) {}
  std::size_t challenge_bits() const override { return bits_; }
  BitString respond(const BitString&) override { return rng_.bits(bits_); }
  BitString invert(const BitString&) override { return rng_.bits(bits_); }

 private:
  Rng rng_;
  std::size_t bits_;
};

// XORs a fixed mask into every device answer in transit. Non-owning.
class TamperedChannel final : public DeviceChannel {
 public:
  TamperedChannel(DeviceChannel& inner, BitString mask)
      : inner_(&inner), mask_(std::move(mask)) {}
  std::size_t challenge_bits() const override { return inner_->challenge_bits(); }
  BitString respond(const BitString& challenge) override;
  BitString invert(const BitString& response) override;
  const BitString& mask() const { return mask_; }

 private:
  DeviceChannel* inner_;
  BitString mask_;
};

// Throws invalid-parameter for positions >= width.
TamperedChannel tamper_channel(DeviceChannel& inner,
                               std::span<const std::size_t> flip_positions,
                               std::size_t width = 64);

enum class Verdict { kAccept, kReject };
enum class Reason { kMatch, kMismatch, kDepleted, kReplay, kTamper };

std::string_view verdict_name(Verdict v);
std::string_view reason_name(Reason r);

struct VerdictReport {
  Verdict verdict = Verdict::kReject;
  Reason reason = Reason::kMismatch;
  std::optional<double> entropy_bits;

  bool accepted() const { return verdict == Verdict::kAccept; }
};

void to_json(nlohmann::json& j, const VerdictReport& r);

// Draws n_pairs fresh distinct challenges, queries the device and appends
// the pairs unused. Any device failure aborts with enrollment-aborted and
// leaves the store untouched. Returns the number stored.
std::size_t enroll(DeviceChannel& device, std::size_t n_pairs, Rng& rng,
                   CrpStore& store);

// One single-use challenge-response round. The record is marked used
// before the device is queried.
VerdictReport identify(CrpStore& store, DeviceChannel& device,
                       std::string_view device_id);

// Checks a presented (challenge, response) transcript against the store,
// consuming the record; a consumed record yields Reject(replay).
VerdictReport verify_transcript(CrpStore& store, std::string_view device_id,
                                const BitString& challenge,
                                const BitString& response);

// Public enrollment data for the structural path, held by the authority.
struct StructuralHelper {
  HelperData fe;
  std::vector<double> thresholds;
  double dof_bits = 0;
};

void to_json(nlohmann::json& j, const StructuralHelper& h);
void from_json(const nlohmann::json& j, StructuralHelper& h);

// Accept iff the fingerprint reproduces the enrolled key with at most
// tau * |reading| corrected bits and the SUC identification accepts.
// entropy_bits = structural dof + suc_entropy_bits.
VerdictReport combined_verify(CrpStore& store, const StructuralHelper& helper,
                              const Fingerprint& fp_measured,
                              DeviceChannel& device, std::string_view device_id,
                              double tau, double suc_entropy_bits = 80.0);

}  // namespace clonebench
