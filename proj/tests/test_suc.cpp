// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <type_traits>
#include <unordered_set>

#include "clonebench/error.hpp"
#include "clonebench/suc.hpp"

namespace clonebench {
namespace {

constexpr std::array<std::uint8_t, 16> kPresentSbox = {0xC, 0x5, 0x6, 0xB, 0x9, 0x0, 0xA, 0xD,
                                                       0x3, 0xE, 0xF, 0x8, 0x4, 0x7, 0x1, 0x2};

SucParams small_params(std::size_t rounds) {
  SucParams p;
  p.rounds = rounds;
  return p;
}

class Suc : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dev_ = new SucDevice(personalize(SucParams{}, Rng(2024), "dev-a"));
  }
  static void TearDownTestSuite() {
    delete dev_;
    dev_ = nullptr;
  }
  static SucDevice* dev_;
};
SucDevice* Suc::dev_ = nullptr;

TEST_F(Suc, DecryptInvertsEncrypt) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t x = rng.next_u64();
    ASSERT_EQ(dev_->decrypt(dev_->encrypt(x)), x);
  }
  const BitString x = rng.bits(64);
  EXPECT_EQ(suc_decrypt(*dev_, suc_encrypt(*dev_, x)), x);
  EXPECT_THROW(suc_encrypt(*dev_, rng.bits(63)), Error);
}

TEST_F(Suc, Avalanche) {
  Rng rng(2);
  double total = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t x = rng.next_u64();
    const std::uint64_t y = x ^ (std::uint64_t{1} << rng.uniform_index(64));
    total += std::popcount(dev_->encrypt(x) ^ dev_->encrypt(y)) / 64.0;
  }
  EXPECT_NEAR(total / trials, 0.5, 0.02);
}

TEST_F(Suc, InjectiveOnSmallDomain) {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t x = 0; x < (1u << 16); ++x) seen.insert(dev_->encrypt(x));
  EXPECT_EQ(seen.size(), std::size_t{1} << 16);
}

TEST_F(Suc, ForeignDeviceDoesNotDecrypt) {
  const SucDevice other = personalize(SucParams{}, Rng(2025), "dev-b");
  Rng rng(3);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = rng.next_u64();
    // Compare only 16 bits: a chance match would be 2^-16 per trial.
    if (((other.decrypt(dev_->encrypt(x)) ^ x) & 0xFFFF) == 0) ++agree;
  }
  EXPECT_LE(agree, 1);
}

TEST(Sbox, DifferenceTableRowsSumToSixteen) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const DifferenceTable ddt = difference_table(random_bijection(rng));
    for (const auto& row : ddt) {
      EXPECT_EQ(std::accumulate(row.begin(), row.end(), 0), 16);
    }
    EXPECT_EQ(ddt[0][0], 16);
  }
}

TEST(Sbox, AuditOfKnownTables) {
  std::array<std::uint8_t, 16> identity{};
  std::iota(identity.begin(), identity.end(), 0);
  const SboxAudit id = sbox_audit(identity);
  EXPECT_EQ(id.ddt_max, 16);
  EXPECT_EQ(id.walsh_max, 16);

  const SboxAudit present = sbox_audit(kPresentSbox);
  EXPECT_EQ(present.ddt_max, 4);
  EXPECT_EQ(present.walsh_max, 8);
  EXPECT_TRUE(sbox_acceptable(SBox::from_table(kPresentSbox), SucParams{}));
  EXPECT_FALSE(sbox_acceptable(SBox::from_table(identity), SucParams{}));
}

TEST(Sbox, WalshMatchesDirectSum) {
  const SBox s = SBox::from_table(kPresentSbox);
  const DifferenceTable w = walsh_table(s);
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      int sum = 0;
      for (int x = 0; x < 16; ++x) {
        sum += (std::popcount(static_cast<unsigned>((a & x) ^ (b & s(x)))) & 1) ? -1 : 1;
      }
      ASSERT_EQ(w[a][b], sum);
    }
  }
}

TEST(Sbox, RejectsNonBijection) {
  std::array<std::uint8_t, 16> t = kPresentSbox;
  t[1] = t[0];
  EXPECT_THROW(SBox::from_table(t), Error);
  EXPECT_THROW(SBox::from_table(std::span<const std::uint8_t>(t.data(), 15)), Error);
  const SBox s = SBox::from_table(kPresentSbox);
  for (std::uint8_t x = 0; x < 16; ++x) EXPECT_EQ(s.inverse()(s(x)), x);
}

TEST(Personalize, DeterministicPerStreamAndDistinct) {
  const SucDevice a = personalize(small_params(4), Rng(11), "a");
  const SucDevice b = personalize(small_params(4), Rng(11), "b");
  const SucDevice c = personalize(small_params(4), Rng(12), "c");
  Rng rng(5);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = rng.next_u64();
    same_ab += a.encrypt(x) == b.encrypt(x);
    same_ac += a.encrypt(x) == c.encrypt(x);
  }
  EXPECT_EQ(same_ab, 100);
  EXPECT_EQ(same_ac, 0);
}

TEST(Personalize, EveryDrawnSboxIsAcceptable) {
  const SucDevice d = personalize(small_params(6), Rng(13), "d");
  const auto j = SucDeviceVault::save(d);
  for (const auto& hex : j.at("descriptor").at("sboxes")) {
    const BitString bits = BitString::from_hex(hex.get<std::string>());
    std::array<std::uint8_t, 16> table{};
    for (std::size_t i = 0; i < 16; ++i) {
      table[i] = static_cast<std::uint8_t>(bits.slice(4 * i, 4).to_u64());
    }
    const SboxAudit a = sbox_audit(table);
    EXPECT_LE(a.ddt_max, 4);
    EXPECT_LE(a.walsh_max, 8);
  }
}

TEST(Personalize, InvalidParamsRejected) {
  SucParams p;
  p.rounds = 0;
  EXPECT_THROW(personalize(p, Rng(1), "x"), Error);
  p = SucParams{};
  p.permutation[0] = p.permutation[1];
  EXPECT_THROW(personalize(p, Rng(1), "x"), Error);
}

TEST(Vault, RoundTripPreservesCipher) {
  const SucDevice d = personalize(small_params(8), Rng(21), "vault");
  const nlohmann::json j = SucDeviceVault::save(d);
  EXPECT_TRUE(j.at("secret").get<bool>());
  const SucDevice back = SucDeviceVault::load(j);
  EXPECT_EQ(back.device_id(), "vault");
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = rng.next_u64();
    EXPECT_EQ(back.encrypt(x), d.encrypt(x));
  }
  nlohmann::json bad = j;
  bad["schema_version"] = 99;
  try {
    SucDeviceVault::load(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataError);
  }
  // One S-box per round plus the master key.
  EXPECT_EQ(SucDeviceVault::descriptor_fragments(d).size(), 9u);
}

TEST(SucType, HidesItsDescriptor) {
  static_assert(!std::is_copy_constructible_v<SucDevice>);
  static_assert(!std::is_copy_assignable_v<SucDevice>);
  static_assert(std::is_nothrow_move_constructible_v<SucDevice>);
  SUCCEED();
}

TEST(KeySchedule, RegisterRotation) {
  const BitString key(80);
  const auto zero = expand_round_keys(key, 3);
  ASSERT_EQ(zero.size(), 4u);
  for (std::uint64_t k : zero) EXPECT_EQ(k, 0u);
  // Single set bit at the top: rotating left by 61 moves it 61 places up
  // (mod 80), i.e. 19 places down.
  BitString top(80);
  top.set(0, true);
  const auto keys = expand_round_keys(top, 1);
  EXPECT_EQ(keys[0], std::uint64_t{1} << 63);
  EXPECT_EQ(keys[1], std::uint64_t{1} << (63 - 19));
  EXPECT_THROW(expand_round_keys(BitString(64), 1), Error);
}

TEST(Permutation, PresentLayer) {
  const BitPermutation p = present_permutation();
  EXPECT_TRUE(is_bijection(p));
  EXPECT_EQ(p[0], 0);
  EXPECT_EQ(p[1], 16);
  EXPECT_EQ(p[4], 1);
  EXPECT_EQ(p[63], 63);
  BitPermutation bad = p;
  bad[5] = bad[6];
  EXPECT_FALSE(is_bijection(bad));
}

TEST(MinActive, KnownCases) {
  EXPECT_EQ(min_active_sboxes(present_permutation(), 1), 1u);
  // Without diffusion one active nibble stays one active nibble.
  for (std::size_t r = 1; r <= 6; ++r) {
    EXPECT_EQ(min_active_sboxes(identity_permutation(), r), r);
  }
  EXPECT_GE(min_active_sboxes(present_permutation(), 5), 5u);
  EXPECT_GE(min_active_sboxes(present_permutation(), 40), 40u);
  // More rounds never lower the bound.
  std::size_t prev = 0;
  for (std::size_t r = 1; r <= 10; ++r) {
    const std::size_t a = min_active_sboxes(present_permutation(), r);
    EXPECT_GE(a, prev);
    prev = a;
  }
}

TEST(MinActive, SampledTrailsRespectBound) {
  Rng gen(32);
  std::vector<SBox> boxes;
  for (int i = 0; i < 5; ++i) {
    SBox s = random_bijection(gen);
    while (!sbox_acceptable(s, SucParams{})) s = random_bijection(gen);
    boxes.push_back(s);
  }
  const std::size_t bound = min_active_sboxes(present_permutation(), 5);
  Rng rng(33);
  for (int t = 0; t < 500; ++t) {
    ASSERT_GE(sample_trail_active_sboxes(boxes, present_permutation(), rng), bound);
  }
}

TEST(SecurityReport, SingleRound) {
  Rng rng(40);
  const SecurityReport r = security_report(small_params(1), 2000, rng);
  EXPECT_EQ(r.min_active_sboxes, 1u);
  EXPECT_DOUBLE_EQ(r.diff_complexity_log2, 2.0);
  EXPECT_DOUBLE_EQ(r.lin_complexity_log2, 2.0);
  EXPECT_GT(r.sbox_acceptance_rate, 0.0);
  EXPECT_DOUBLE_EQ(r.cardinality_bits, 80.0 + r.sbox_entropy_bits);
}

TEST(SecurityReport, FullCipherBounds) {
  Rng rng(41);
  const SecurityReport r = security_report(SucParams{}, 20000, rng);
  EXPECT_GE(r.min_active_sboxes, 40u);
  EXPECT_GE(r.diff_complexity_log2, 80.0);
  EXPECT_GE(r.cardinality_bits, 274.0);
}

TEST(SecurityReport, InsufficientSampling) {
  Rng rng(42);
  try {
    security_report(SucParams{}, 999, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSampling);
  }
}

TEST(SecurityReport, DisjointBatchesAgree) {
  Rng a(50);
  Rng b(51);
  const double ra = sbox_acceptance_rate(SucParams{}, 50000, a);
  const double rb = sbox_acceptance_rate(SucParams{}, 50000, b);
  EXPECT_GT(ra, 0.0);
  // log2 of the rates differ by well under half a bit.
  EXPECT_LT(std::abs(std::log2(ra) - std::log2(rb)), 0.5);
}

TEST(Responder, ForwardMode) {
  const SucDevice d = personalize(small_params(3), Rng(60), "r");
  const SucResponder resp(d);
  const BitString c = BitString::from_u64(0x0123456789abcdefULL);
  EXPECT_EQ(resp.respond(c, EnvironmentConditions::nominal(), nullptr), suc_encrypt(d, c));
}

}  // namespace
}  // namespace clonebench
