// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/suc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "clonebench/error.hpp"
#include "clonebench/serialization.hpp"

namespace clonebench {
namespace {

constexpr std::size_t kKeyBits = 80;
constexpr unsigned __int128 kKeyMask = (static_cast<unsigned __int128>(1) << kKeyBits) - 1;

int parity4(unsigned v) { return std::popcount(v & 0xFu) & 1; }

double log2_factorial(unsigned n) {
  return std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
}

}  // namespace

BitPermutation present_permutation() {
  BitPermutation p{};
  for (unsigned i = 0; i < 63; ++i) p[i] = static_cast<std::uint8_t>((16 * i) % 63);
  p[63] = 63;
  return p;
}

BitPermutation identity_permutation() {
  BitPermutation p{};
  for (unsigned i = 0; i < 64; ++i) p[i] = static_cast<std::uint8_t>(i);
  return p;
}

bool is_bijection(const BitPermutation& perm) {
  std::uint64_t seen = 0;
  for (auto v : perm) {
    if (v >= 64) return false;
    seen |= std::uint64_t{1} << v;
  }
  return seen == ~std::uint64_t{0};
}

void SucParams::validate() const {
  require(block_bits == 64 && nibbles == 16, ErrorCode::kInvalidParameter,
          "SUC block is fixed at 64 bits / 16 nibbles");
  require(key_bits == kKeyBits, ErrorCode::kInvalidParameter,
          "SUC master key is fixed at 80 bits");
  require(rounds >= 1, ErrorCode::kInvalidParameter, "rounds must be >= 1");
  require(sbox_ddt_max == 4 && sbox_walsh_max == 8, ErrorCode::kInvalidParameter,
          "S-box acceptance thresholds are fixed at DDT 4 / Walsh 8");
  require(is_bijection(permutation), ErrorCode::kInvalidParameter,
          "permutation must be a bijection on 64 positions");
}

// ---------------------------------------------------------------------------
// S-boxes

SBox SBox::from_table(std::span<const std::uint8_t> table) {
  require(table.size() == 16, ErrorCode::kInvalidSbox, "S-box needs 16 entries");
  unsigned seen = 0;
  SBox s;
  for (std::size_t i = 0; i < 16; ++i) {
    require(table[i] < 16, ErrorCode::kInvalidSbox, "S-box entry out of range");
    seen |= 1u << table[i];
    s.table_[i] = table[i];
  }
  require(seen == 0xFFFFu, ErrorCode::kInvalidSbox, "S-box is not a bijection");
  return s;
}

SBox SBox::inverse() const {
  SBox inv;
  for (std::uint8_t x = 0; x < 16; ++x) inv.table_[table_[x]] = x;
  return inv;
}

DifferenceTable difference_table(const SBox& s) {
  DifferenceTable ddt{};
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned x = 0; x < 16; ++x) {
      ++ddt[a][s(static_cast<std::uint8_t>(x ^ a)) ^ s(static_cast<std::uint8_t>(x))];
    }
  }
  return ddt;
}

DifferenceTable walsh_table(const SBox& s) {
  DifferenceTable w{};
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      int sum = 0;
      for (unsigned x = 0; x < 16; ++x) {
        sum += parity4((a & x) ^ (b & s(static_cast<std::uint8_t>(x)))) ? -1 : 1;
      }
      w[a][b] = sum;
    }
  }
  return w;
}

SboxAudit sbox_audit(std::span<const std::uint8_t> table) {
  const SBox s = SBox::from_table(table);
  const auto ddt = difference_table(s);
  const auto walsh = walsh_table(s);
  SboxAudit audit;
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      if (a != 0) audit.ddt_max = std::max(audit.ddt_max, ddt[a][b]);
      if (a != 0 || b != 0) audit.walsh_max = std::max(audit.walsh_max, std::abs(walsh[a][b]));
    }
  }
  return audit;
}

bool sbox_acceptable(const SBox& s, const SucParams& params) {
  // Cheap DDT pass with early exit first; most candidates fail here.
  for (unsigned a = 1; a < 16; ++a) {
    int row[16] = {};
    for (unsigned x = 0; x < 16; ++x) {
      if (++row[s(static_cast<std::uint8_t>(x ^ a)) ^ s(static_cast<std::uint8_t>(x))] >
          params.sbox_ddt_max) {
        return false;
      }
    }
  }
  const auto walsh = walsh_table(s);
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      if ((a != 0 || b != 0) && std::abs(walsh[a][b]) > params.sbox_walsh_max) return false;
    }
  }
  return true;
}

SBox random_bijection(Rng& rng) {
  std::array<std::uint8_t, 16> t{};
  for (std::uint8_t i = 0; i < 16; ++i) t[i] = i;
  for (std::size_t i = 15; i > 0; --i) std::swap(t[i], t[rng.uniform_index(i + 1)]);
  return SBox::from_table(t);
}

// ---------------------------------------------------------------------------
// Cipher

std::vector<std::uint64_t> expand_round_keys(const BitString& master_key,
                                             std::size_t rounds) {
  require(master_key.size() == kKeyBits, ErrorCode::kInvalidInput,
          "master key must be 80 bits");
  unsigned __int128 reg = 0;
  for (std::size_t i = 0; i < kKeyBits; ++i) {
    reg = (reg << 1) | (master_key.get(i) ? 1u : 0u);
  }
  std::vector<std::uint64_t> keys(rounds + 1);
  for (auto& k : keys) {
    k = static_cast<std::uint64_t>(reg >> (kKeyBits - 64));
    reg = ((reg << 61) | (reg >> (kKeyBits - 61))) & kKeyMask;
  }
  return keys;
}

SucDevice::SucDevice(SucParams params, std::string device_id,
                     std::vector<SBox> sboxes, BitString master_key)
    : params_(std::move(params)),
      device_id_(std::move(device_id)),
      sboxes_(std::move(sboxes)),
      master_key_(std::move(master_key)) {
  params_.validate();
  require(sboxes_.size() == params_.rounds, ErrorCode::kInvalidInput,
          "descriptor needs one S-box per round");
  round_keys_ = expand_round_keys(master_key_, params_.rounds);
  sub_.resize(params_.rounds);
  inv_sub_.resize(params_.rounds);
  for (std::size_t r = 0; r < params_.rounds; ++r) {
    const SBox inv = sboxes_[r].inverse();
    for (unsigned v = 0; v < 256; ++v) {
      const auto lo = static_cast<std::uint8_t>(v & 0xF);
      const auto hi = static_cast<std::uint8_t>(v >> 4);
      sub_[r][v] = static_cast<std::uint8_t>(sboxes_[r](lo) | (sboxes_[r](hi) << 4));
      inv_sub_[r][v] = static_cast<std::uint8_t>(inv(lo) | (inv(hi) << 4));
    }
  }
  BitPermutation inverse{};
  for (unsigned i = 0; i < 64; ++i) inverse[params_.permutation[i]] = static_cast<std::uint8_t>(i);
  for (unsigned lane = 0; lane < 8; ++lane) {
    for (unsigned v = 0; v < 256; ++v) {
      std::uint64_t fwd = 0;
      std::uint64_t bwd = 0;
      for (unsigned b = 0; b < 8; ++b) {
        if (!((v >> b) & 1u)) continue;
        fwd |= std::uint64_t{1} << params_.permutation[8 * lane + b];
        bwd |= std::uint64_t{1} << inverse[8 * lane + b];
      }
      perm_[lane][v] = fwd;
      inv_perm_[lane][v] = bwd;
    }
  }
}

std::uint64_t SucDevice::permute(std::uint64_t s) const {
  std::uint64_t out = 0;
  for (unsigned lane = 0; lane < 8; ++lane) out |= perm_[lane][(s >> (8 * lane)) & 0xFF];
  return out;
}

std::uint64_t SucDevice::unpermute(std::uint64_t s) const {
  std::uint64_t out = 0;
  for (unsigned lane = 0; lane < 8; ++lane) out |= inv_perm_[lane][(s >> (8 * lane)) & 0xFF];
  return out;
}

std::uint64_t SucDevice::encrypt(std::uint64_t x) const {
  std::uint64_t s = x;
  for (std::size_t r = 0; r < params_.rounds; ++r) {
    s ^= round_keys_[r];
    std::uint64_t t = 0;
    for (unsigned lane = 0; lane < 8; ++lane) {
      t |= std::uint64_t{sub_[r][(s >> (8 * lane)) & 0xFF]} << (8 * lane);
    }
    s = permute(t);
  }
  return s ^ round_keys_[params_.rounds];
}

std::uint64_t SucDevice::decrypt(std::uint64_t y) const {
  std::uint64_t s = y ^ round_keys_[params_.rounds];
  for (std::size_t r = params_.rounds; r-- > 0;) {
    const std::uint64_t t = unpermute(s);
    s = 0;
    for (unsigned lane = 0; lane < 8; ++lane) {
      s |= std::uint64_t{inv_sub_[r][(t >> (8 * lane)) & 0xFF]} << (8 * lane);
    }
    s ^= round_keys_[r];
  }
  return s;
}

SucDevice personalize(const SucParams& params, Rng trng, std::string device_id) {
  params.validate();
  std::vector<SBox> sboxes;
  sboxes.reserve(params.rounds);
  for (std::size_t r = 0; r < params.rounds; ++r) {
    std::size_t tries = 0;
    for (;;) {
      require(tries++ < kSboxRejectionBudget, ErrorCode::kGenerationFailure,
              "S-box rejection budget exhausted");
      SBox candidate = random_bijection(trng);
      if (sbox_acceptable(candidate, params)) {
        sboxes.push_back(candidate);
        break;
      }
    }
  }
  BitString key = trng.bits(kKeyBits);
  return SucDevice(params, std::move(device_id), std::move(sboxes), std::move(key));
}

BitString suc_encrypt(const SucDevice& dev, const BitString& x) {
  require(x.size() == 64, ErrorCode::kInvalidInput, "SUC block must be 64 bits");
  return BitString::from_u64(dev.encrypt(x.to_u64()));
}

BitString suc_decrypt(const SucDevice& dev, const BitString& y) {
  require(y.size() == 64, ErrorCode::kInvalidInput, "SUC block must be 64 bits");
  return BitString::from_u64(dev.decrypt(y.to_u64()));
}

BitString SucResponder::respond(const BitString& challenge,
                                const EnvironmentConditions& env, Rng*) const {
  env.validate();
  return suc_encrypt(*dev_, challenge);
}

// ---------------------------------------------------------------------------
// Persistence

nlohmann::json params_to_json(const SucParams& p) {
  return nlohmann::json{{"block_bits", p.block_bits},
                        {"nibbles", p.nibbles},
                        {"rounds", p.rounds},
                        {"key_bits", p.key_bits},
                        {"sbox_ddt_max", p.sbox_ddt_max},
                        {"sbox_walsh_max", p.sbox_walsh_max},
                        {"permutation", p.permutation}};
}

SucParams params_from_json(const nlohmann::json& j) {
  SucParams p;
  p.block_bits = j.value("block_bits", p.block_bits);
  p.nibbles = j.value("nibbles", p.nibbles);
  p.rounds = j.value("rounds", p.rounds);
  p.key_bits = j.value("key_bits", p.key_bits);
  p.sbox_ddt_max = j.value("sbox_ddt_max", p.sbox_ddt_max);
  p.sbox_walsh_max = j.value("sbox_walsh_max", p.sbox_walsh_max);
  if (j.contains("permutation")) {
    const auto& arr = j.at("permutation");
    require(arr.is_array() && arr.size() == 64, ErrorCode::kInvalidParameter,
            "permutation must list 64 positions");
    for (std::size_t i = 0; i < 64; ++i) {
      const int v = arr[i].get<int>();
      require(v >= 0 && v < 64, ErrorCode::kInvalidParameter,
              "permutation entry out of range");
      p.permutation[i] = static_cast<std::uint8_t>(v);
    }
  }
  p.validate();
  return p;
}

nlohmann::json SucDeviceVault::save(const SucDevice& dev) {
  nlohmann::json sboxes = nlohmann::json::array();
  for (const auto& s : dev.sboxes_) {
    std::string hex;
    for (auto v : s.table()) hex.push_back("0123456789abcdef"[v]);
    sboxes.push_back(hex);
  }
  return nlohmann::json{
      {"schema_version", kSchemaVersion},
      {"device_id", dev.device_id_},
      {"secret", true},
      {"params", params_to_json(dev.params_)},
      {"descriptor",
       {{"sboxes", sboxes}, {"master_key_hex", dev.master_key_.to_hex()}}}};
}

SucDevice SucDeviceVault::load(const nlohmann::json& j) {
  check_schema_version(j);
  try {
    SucParams params = params_from_json(j.at("params"));
    const auto& d = j.at("descriptor");
    std::vector<SBox> sboxes;
    for (const auto& entry : d.at("sboxes")) {
      const BitString bits = BitString::from_hex(entry.get<std::string>(), 64);
      std::array<std::uint8_t, 16> t{};
      for (std::size_t i = 0; i < 16; ++i) {
        t[i] = static_cast<std::uint8_t>(bits.slice(4 * i, 4).to_u64());
      }
      SBox s = SBox::from_table(t);
      require(sbox_acceptable(s, params), ErrorCode::kDataError,
              "device file holds an S-box failing the acceptance thresholds");
      sboxes.push_back(s);
    }
    BitString key = BitString::from_hex(d.at("master_key_hex").get<std::string>(), kKeyBits);
    return SucDevice(std::move(params), j.at("device_id").get<std::string>(),
                     std::move(sboxes), std::move(key));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kDataError, std::string("malformed SUC device file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDataError) throw;
    fail(ErrorCode::kDataError, e.what());
  }
}

std::vector<std::string> SucDeviceVault::descriptor_fragments(const SucDevice& dev) {
  std::vector<std::string> out;
  const nlohmann::json saved = save(dev);
  for (const auto& entry : saved.at("descriptor").at("sboxes")) {
    out.push_back(entry.get<std::string>());
  }
  out.push_back(dev.master_key_.to_hex());
  return out;
}

// ---------------------------------------------------------------------------
// Trail bounds

std::size_t min_active_sboxes(const BitPermutation& perm, std::size_t rounds) {
  require(rounds >= 1, ErrorCode::kInvalidParameter, "rounds must be >= 1");
  require(is_bijection(perm), ErrorCode::kInvalidParameter,
          "permutation must be a bijection");
  constexpr std::size_t kStates = 1u << 16;
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;

  // Nibbles reached by the output bits of each nibble.
  std::array<std::uint16_t, 16> targets{};
  for (unsigned j = 0; j < 16; ++j) {
    for (unsigned b = 0; b < 4; ++b) targets[j] |= static_cast<std::uint16_t>(1u << (perm[4 * j + b] / 4));
  }
  std::vector<std::uint16_t> cover(kStates, 0);
  for (std::size_t m = 1; m < kStates; ++m) {
    cover[m] = cover[m & (m - 1)] | targets[std::countr_zero(m)];
  }

  // cost[m]: fewest active S-boxes of a trail whose last round has activity m.
  // cost is monotone under inclusion, so the best predecessor of m is the
  // cheapest pattern whose reachable set covers m (superset-min transform).
  std::vector<std::uint32_t> cost(kStates), best(kStates);
  cost[0] = kInf;
  for (std::size_t m = 1; m < kStates; ++m) cost[m] = static_cast<std::uint32_t>(std::popcount(m));

  for (std::size_t r = 1; r < rounds; ++r) {
    std::fill(best.begin(), best.end(), kInf);
    for (std::size_t m = 1; m < kStates; ++m) best[cover[m]] = std::min(best[cover[m]], cost[m]);
    for (unsigned b = 0; b < 16; ++b) {
      for (std::size_t m = 0; m < kStates; ++m) {
        if (!(m & (1u << b))) best[m] = std::min(best[m], best[m | (1u << b)]);
      }
    }
    cost[0] = kInf;
    for (std::size_t m = 1; m < kStates; ++m) {
      cost[m] = best[m] >= kInf ? kInf
                                : best[m] + static_cast<std::uint32_t>(std::popcount(m));
    }
  }
  return *std::min_element(cost.begin() + 1, cost.end());
}

std::size_t sample_trail_active_sboxes(std::span<const SBox> round_sboxes,
                                       const BitPermutation& perm, Rng& rng) {
  require(!round_sboxes.empty(), ErrorCode::kInvalidParameter, "need >= 1 round");
  std::uint64_t diff = 0;
  while (diff == 0) diff = rng.next_u64();
  std::size_t active = 0;
  for (const auto& s : round_sboxes) {
    const auto ddt = difference_table(s);
    std::uint64_t out = 0;
    for (unsigned j = 0; j < 16; ++j) {
      const unsigned a = (diff >> (4 * j)) & 0xF;
      if (a == 0) continue;
      ++active;
      std::array<unsigned, 16> options{};
      std::size_t n = 0;
      for (unsigned b = 1; b < 16; ++b) {
        if (ddt[a][b] > 0) options[n++] = b;
      }
      out |= std::uint64_t{options[rng.uniform_index(n)]} << (4 * j);
    }
    diff = 0;
    for (unsigned i = 0; i < 64; ++i) {
      if ((out >> i) & 1u) diff |= std::uint64_t{1} << perm[i];
    }
  }
  return active;
}

double sbox_acceptance_rate(const SucParams& params, std::size_t samples,
                            Rng& rng) {
  require(samples >= 1, ErrorCode::kInsufficientSampling, "no samples requested");
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    if (sbox_acceptable(random_bijection(rng), params)) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(samples);
}

SecurityReport security_report(const SucParams& params,
                               std::size_t sample_budget, Rng& rng) {
  params.validate();
  require(sample_budget >= 1000, ErrorCode::kInsufficientSampling,
          "security report needs >= 1000 sampled bijections");
  SecurityReport rep;
  rep.sample_budget = sample_budget;
  rep.sbox_acceptance_rate = sbox_acceptance_rate(params, sample_budget, rng);
  require(rep.sbox_acceptance_rate > 0, ErrorCode::kInsufficientSampling,
          "no acceptable S-box in the sample");
  rep.sbox_entropy_bits = log2_factorial(16) + std::log2(rep.sbox_acceptance_rate);
  rep.cardinality_bits = static_cast<double>(params.key_bits) +
                         static_cast<double>(params.rounds) * rep.sbox_entropy_bits;
  rep.min_active_sboxes = min_active_sboxes(params.permutation, params.rounds);
  // Single-trail bounds: DP <= 2^-2 and |correlation| <= 2^-1 per active box.
  rep.diff_complexity_log2 = 2.0 * static_cast<double>(rep.min_active_sboxes);
  rep.lin_complexity_log2 = 2.0 * static_cast<double>(rep.min_active_sboxes);
  return rep;
}

void to_json(nlohmann::json& j, const SecurityReport& r) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"cardinality_bits", r.cardinality_bits},
                     {"sbox_entropy_bits", r.sbox_entropy_bits},
                     {"sbox_acceptance_rate", r.sbox_acceptance_rate},
                     {"sample_budget", r.sample_budget},
                     {"min_active_sboxes", r.min_active_sboxes},
                     {"diff_complexity_log2", r.diff_complexity_log2},
                     {"lin_complexity_log2", r.lin_complexity_log2}};
}

}  // namespace clonebench
