// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/auth.hpp"

#include <unordered_set>

#include "clonebench/error.hpp"
#include "clonebench/serialization.hpp"
#include "clonebench/suc.hpp"

namespace clonebench {

std::string_view mode_name(CrpMode mode) {
  return mode == CrpMode::kForward ? "forward" : "inverse";
}

CrpMode parse_mode(std::string_view name) {
  if (name == "forward") return CrpMode::kForward;
  if (name == "inverse") return CrpMode::kInverse;
  fail(ErrorCode::kInvalidParameter, "mode must be 'forward' or 'inverse'");
}

// ---------------------------------------------------------------------------
// Store

CrpStore::CrpStore(std::string device_id, CrpMode mode,
                   std::size_t challenge_bits, std::size_t response_bits)
    : device_id_(std::move(device_id)),
      mode_(mode),
      challenge_bits_(challenge_bits),
      response_bits_(response_bits) {
  require(challenge_bits_ >= 1 && response_bits_ >= 1,
          ErrorCode::kInvalidParameter, "CRP widths must be >= 1");
}

std::size_t CrpStore::size() const {
  std::lock_guard lock(*mu_);
  return records_.size();
}

std::size_t CrpStore::unused_count() const {
  std::lock_guard lock(*mu_);
  std::size_t n = 0;
  for (const auto& r : records_) n += r.used ? 0 : 1;
  return n;
}

std::vector<CrpRecord> CrpStore::records() const {
  std::lock_guard lock(*mu_);
  return records_;
}

bool CrpStore::contains_challenge(const BitString& challenge) const {
  std::lock_guard lock(*mu_);
  for (const auto& r : records_) {
    if (r.challenge == challenge) return true;
  }
  return false;
}

void CrpStore::append(std::vector<CrpRecord> batch) {
  std::lock_guard lock(*mu_);
  std::unordered_set<std::string> seen;
  for (const auto& r : records_) seen.insert(r.challenge.to_hex());
  for (const auto& r : batch) {
    require(r.challenge.size() == challenge_bits_ &&
                r.response.size() == response_bits_,
            ErrorCode::kInvalidInput, "CRP width does not match the store");
    require(seen.insert(r.challenge.to_hex()).second, ErrorCode::kInvalidInput,
            "duplicate challenge in store");
  }
  for (auto& r : batch) records_.push_back(std::move(r));
}

std::optional<CrpRecord> CrpStore::claim_next() {
  std::lock_guard lock(*mu_);
  while (first_unused_ < records_.size() && records_[first_unused_].used) {
    ++first_unused_;
  }
  if (first_unused_ == records_.size()) return std::nullopt;
  records_[first_unused_].used = true;
  return records_[first_unused_++];
}

CrpStore::ClaimStatus CrpStore::claim(const BitString& challenge, CrpRecord* out) {
  std::lock_guard lock(*mu_);
  for (auto& r : records_) {
    if (r.challenge != challenge) continue;
    const bool was_used = r.used;
    r.used = true;
    if (out != nullptr) *out = r;
    return was_used ? ClaimStatus::kAlreadyUsed : ClaimStatus::kClaimed;
  }
  return ClaimStatus::kUnknown;
}

nlohmann::json store_to_json(const CrpStore& store) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : store.records()) {
    records.push_back({{"c_hex", r.challenge.to_hex()},
                       {"r_hex", r.response.to_hex()},
                       {"used", r.used}});
  }
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"device_id", store.device_id()},
                        {"mode", mode_name(store.mode())},
                        {"challenge_bits", store.challenge_bits()},
                        {"response_bits", store.response_bits()},
                        {"records", records}};
}

CrpStore store_from_json(const nlohmann::json& j) {
  check_schema_version(j);
  try {
    CrpStore store(j.at("device_id").get<std::string>(),
                   parse_mode(j.at("mode").get<std::string>()),
                   j.value("challenge_bits", std::size_t{64}),
                   j.value("response_bits", std::size_t{64}));
    std::vector<CrpRecord> batch;
    for (const auto& r : j.at("records")) {
      batch.push_back({BitString::from_hex(r.at("c_hex").get<std::string>(),
                                           store.challenge_bits()),
                       BitString::from_hex(r.at("r_hex").get<std::string>(),
                                           store.response_bits()),
                       r.at("used").get<bool>()});
    }
    store.append(std::move(batch));
    return store;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kDataError, std::string("malformed CRP store: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDataError) throw;
    fail(ErrorCode::kDataError, e.what());
  }
}

// ---------------------------------------------------------------------------
// Channels

BitString DeviceChannel::invert(const BitString&) {
  throw ChannelError("device does not support inverse-mode queries");
}

BitString SucChannel::respond(const BitString& challenge) {
  return suc_encrypt(*dev_, challenge);
}

BitString SucChannel::invert(const BitString& response) {
  return suc_decrypt(*dev_, response);
}

BitString PufChannel::respond(const BitString& challenge) {
  return device_->respond(challenge, env_, &noise_);
}

BitString TamperedChannel::respond(const BitString& challenge) {
  BitString r = inner_->respond(challenge);
  if (r.size() != mask_.size()) throw ChannelError("tamper mask width mismatch");
  return r ^ mask_;
}

BitString TamperedChannel::invert(const BitString& response) {
  BitString x = inner_->invert(response);
  if (x.size() != mask_.size()) throw ChannelError("tamper mask width mismatch");
  return x ^ mask_;
}

TamperedChannel tamper_channel(DeviceChannel& inner,
                               std::span<const std::size_t> flip_positions,
                               std::size_t width) {
  BitString mask(width);
  for (auto p : flip_positions) {
    require(p < width, ErrorCode::kInvalidParameter, "flip position out of range");
    mask.set(p, true);
  }
  return TamperedChannel(inner, std::move(mask));
}

// ---------------------------------------------------------------------------
// Protocol

std::string_view verdict_name(Verdict v) {
  return v == Verdict::kAccept ? "accept" : "reject";
}

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::kMatch: return "match";
    case Reason::kMismatch: return "mismatch";
    case Reason::kDepleted: return "depleted";
    case Reason::kReplay: return "replay";
    case Reason::kTamper: return "tamper";
  }
  return "mismatch";
}

void to_json(nlohmann::json& j, const VerdictReport& r) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"verdict", verdict_name(r.verdict)},
                     {"reason", reason_name(r.reason)}};
  if (r.entropy_bits) j["entropy_bits"] = *r.entropy_bits;
}

namespace {

VerdictReport reject(Reason why) { return {Verdict::kReject, why, std::nullopt}; }

void check_device(const CrpStore& store, std::string_view device_id) {
  require(store.device_id() == device_id, ErrorCode::kInvalidInput,
          "store belongs to device '" + store.device_id() + "'");
}

}  // namespace

std::size_t enroll(DeviceChannel& device, std::size_t n_pairs, Rng& rng,
                   CrpStore& store) {
  require(n_pairs >= 1, ErrorCode::kInvalidParameter, "n_pairs must be >= 1");
  require(device.challenge_bits() == store.challenge_bits(),
          ErrorCode::kInvalidParameter, "device challenge width differs from store");
  std::unordered_set<std::string> seen;
  for (const auto& r : store.records()) seen.insert(r.challenge.to_hex());
  std::vector<CrpRecord> batch;
  batch.reserve(n_pairs);
  try {
    while (batch.size() < n_pairs) {
      BitString c = rng.bits(store.challenge_bits());
      if (!seen.insert(c.to_hex()).second) continue;
      BitString r = device.respond(c);
      if (r.size() != store.response_bits()) {
        throw ChannelError("device response has the wrong width");
      }
      if (store.mode() == CrpMode::kInverse && device.invert(r) != c) {
        throw ChannelError("device cannot invert its own response");
      }
      batch.push_back({std::move(c), std::move(r), false});
    }
  } catch (const ChannelError& e) {
    fail(ErrorCode::kEnrollmentAborted, e.what());
  } catch (const Error& e) {
    fail(ErrorCode::kEnrollmentAborted, e.what());
  }
  store.append(std::move(batch));
  return n_pairs;
}

VerdictReport identify(CrpStore& store, DeviceChannel& device,
                       std::string_view device_id) {
  check_device(store, device_id);
  const auto record = store.claim_next();
  if (!record) return reject(Reason::kDepleted);
  try {
    if (store.mode() == CrpMode::kForward) {
      const BitString answer = device.respond(record->challenge);
      return answer == record->response ? VerdictReport{Verdict::kAccept, Reason::kMatch, std::nullopt}
                                        : reject(Reason::kMismatch);
    }
    const BitString answer = device.invert(record->response);
    return answer == record->challenge ? VerdictReport{Verdict::kAccept, Reason::kMatch, std::nullopt}
                                       : reject(Reason::kMismatch);
  } catch (const ChannelError&) {
    return reject(Reason::kTamper);
  }
}

VerdictReport verify_transcript(CrpStore& store, std::string_view device_id,
                                const BitString& challenge,
                                const BitString& response) {
  check_device(store, device_id);
  CrpRecord record;
  switch (store.claim(challenge, &record)) {
    case CrpStore::ClaimStatus::kAlreadyUsed:
      return reject(Reason::kReplay);
    case CrpStore::ClaimStatus::kUnknown:
      return reject(Reason::kMismatch);
    case CrpStore::ClaimStatus::kClaimed:
      break;
  }
  return record.response == response
             ? VerdictReport{Verdict::kAccept, Reason::kMatch, std::nullopt}
             : reject(Reason::kMismatch);
}

void to_json(nlohmann::json& j, const StructuralHelper& h) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"fe", h.fe},
                     {"thresholds", h.thresholds},
                     {"dof_bits", h.dof_bits}};
}

void from_json(const nlohmann::json& j, StructuralHelper& h) {
  check_schema_version(j);
  h.fe = j.at("fe").get<HelperData>();
  h.thresholds = j.at("thresholds").get<std::vector<double>>();
  h.dof_bits = j.at("dof_bits").get<double>();
}

VerdictReport combined_verify(CrpStore& store, const StructuralHelper& helper,
                              const Fingerprint& fp_measured,
                              DeviceChannel& device, std::string_view device_id,
                              double tau, double suc_entropy_bits) {
  require(tau > 0 && tau < 0.5, ErrorCode::kInvalidParameter,
          "tau must lie in (0, 0.5)");
  const std::size_t n = helper.fe.sketch.size();
  require(fp_measured.bits.size() >= n, ErrorCode::kInvalidInput,
          "fingerprint is shorter than the enrolled reading");
  const double entropy = helper.dof_bits + suc_entropy_bits;

  const Reproduction rep = fe_reproduce_detailed(fp_measured.bits.slice(0, n), helper.fe);
  const bool structural_ok =
      rep.key.has_value() &&
      static_cast<double>(rep.corrected_bits) <= tau * static_cast<double>(n);
  if (!structural_ok) return {Verdict::kReject, Reason::kMismatch, entropy};

  VerdictReport out = identify(store, device, device_id);
  out.entropy_bits = entropy;
  return out;
}

}  // namespace clonebench
