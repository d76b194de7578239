// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "clonebench/error.hpp"
#include "clonebench/puf_models.hpp"

namespace clonebench {
namespace {

// Both racing signals traced stage by stage; shares nothing with the
// linear reduction inside ArbiterPuf.
int path_delay(const ArbiterPuf& puf, const BitString& c, double* gap = nullptr) {
  double top = 0;
  double bottom = 0;
  for (std::size_t i = 0; i < puf.n_stages(); ++i) {
    const StageDelays& d = puf.stage_delays()[i];
    if (!c.get(i)) {
      top += d.straight_top;
      bottom += d.straight_bottom;
    } else {
      const double t = bottom + d.cross_to_top;
      bottom = top + d.cross_to_bottom;
      top = t;
    }
  }
  if (gap != nullptr) *gap = top - bottom;
  return top - bottom > 0 ? 1 : 0;
}

const EnvironmentConditions kNominal = EnvironmentConditions::nominal();

TEST(Arbiter, LinearFormMatchesPathDelayExhaustively) {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto puf = ArbiterPuf::create(n, 1000 * n + seed);
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        const auto c = BitString::from_u64(v, n);
        ASSERT_EQ(arbiter_eval(puf, c, kNominal, nullptr), path_delay(puf, c))
            << "n=" << n << " c=" << c.to_binary();
      }
    }
  }
}

TEST(Arbiter, WeightsReproducePathGap) {
  const auto puf = ArbiterPuf::create(16, 5);
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    const BitString c = rng.bits(16);
    double gap = 0;
    path_delay(puf, c, &gap);
    const auto phi = parity_features(c);
    double dot = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) dot += puf.weights()[i] * phi[i];
    EXPECT_NEAR(dot, gap, 1e-9);
  }
}

TEST(Arbiter, FrozenFourStageExample) {
  const auto puf = ArbiterPuf::create(4, 42);
  const auto c = BitString::from_binary("0110");
  EXPECT_DOUBLE_EQ(puf.stage_delays()[0].straight_top, 1.0853089805166911);
  double gap = 0;
  EXPECT_EQ(path_delay(puf, c, &gap), 1);
  EXPECT_NEAR(gap, 1.8989, 1e-3);
  EXPECT_EQ(arbiter_eval(puf, c, kNominal, nullptr), 1);
}

TEST(Arbiter, ParityFeatures) {
  const auto phi = parity_features(BitString::from_binary("0110"));
  ASSERT_EQ(phi.size(), 5u);
  // phi_i = prod_{j >= i} (1 - 2 c_j)
  EXPECT_EQ(phi[0], 1.0);
  EXPECT_EQ(phi[1], 1.0);
  EXPECT_EQ(phi[2], -1.0);
  EXPECT_EQ(phi[3], 1.0);
  EXPECT_EQ(phi[4], 1.0);
}

TEST(Arbiter, FromWeightsRoundTrip) {
  const std::vector<double> w{0.5, -1.25, 2.0, 0.75};
  const auto puf = ArbiterPuf::from_weights(w, 0.0);
  ASSERT_EQ(puf.weights().size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(puf.weights()[i], w[i], 1e-12);
}

TEST(Arbiter, ChallengeSpaceAndLengthChecks) {
  const auto puf = ArbiterPuf::create(64, 1);
  EXPECT_DOUBLE_EQ(puf.challenge_space_size(), std::ldexp(1.0, 64));
  EXPECT_THROW(arbiter_eval(puf, BitString(63), kNominal, nullptr), Error);
  EXPECT_THROW(ArbiterPuf::create(0, 1), Error);
}

TEST(Arbiter, NoiseGrowsAwayFromNominal) {
  EXPECT_DOUBLE_EQ(arbiter_env_scale({25.0, 1.26}), 1.0);
  EXPECT_DOUBLE_EQ(arbiter_env_scale({85.0, 1.26}), 1.6);
  EXPECT_DOUBLE_EQ(arbiter_env_scale({-40.0, 1.26}), 1.65);
  EXPECT_THROW(arbiter_eval(ArbiterPuf::create(8, 1), BitString(8), {90.0, 1.26}, nullptr), Error);
  EXPECT_THROW((EnvironmentConditions{25.0, 1.5}.validate()), Error);
}

TEST(Arbiter, ResponsesRoughlyUniform) {
  Rng rng(11);
  std::size_t ones = 0;
  const std::size_t n = 20000;
  for (std::size_t d = 0; d < 20; ++d) {
    const auto puf = ArbiterPuf::create(64, 500 + d);
    for (std::size_t i = 0; i < n / 20; ++i) ones += arbiter_eval(puf, rng.bits(64), kNominal, nullptr);
  }
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.05);
}

TEST(XorArbiter, IsXorOfComponents) {
  std::vector<ArbiterPuf> pufs;
  for (int i = 0; i < 3; ++i) pufs.push_back(ArbiterPuf::create(32, 70 + i));
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const BitString c = rng.bits(32);
    int x = 0;
    for (const auto& p : pufs) x ^= path_delay(p, c);
    EXPECT_EQ(xor_arbiter_eval(pufs, c, kNominal, nullptr), x);
  }
}

TEST(RoPuf, ComparesFrequencies) {
  const auto puf = RoPuf::from_frequencies({100e6, 101e6, 99e6}, 0.0);
  EXPECT_EQ(ro_eval(puf, 1, 0, nullptr), 1);
  EXPECT_EQ(ro_eval(puf, 2, 0, nullptr), 0);
  EXPECT_THROW(ro_eval(puf, 1, 1, nullptr), Error);
  EXPECT_THROW(ro_eval(puf, 0, 3, nullptr), Error);
  try {
    ro_eval(puf, 2, 2, nullptr);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPair);
  }
}

TEST(RoPuf, DeviceIgnoresChallenge) {
  RoDevice dev(RoPuf::create(16, 4));
  EXPECT_EQ(dev.challenge_bits(), 0u);
  EXPECT_EQ(dev.response_bits(), 8u);
  EXPECT_EQ(dev.respond(BitString(), kNominal, nullptr),
            dev.respond(BitString::from_binary("1"), kNominal, nullptr));
}

TEST(Sram, CalibrationInvertsExpectedBer) {
  for (double ber : {0.01, 0.06, 0.08, 0.25}) {
    EXPECT_NEAR(sram_expected_ber(calibrate_sram_noise(ber)), ber, 1e-12);
  }
  EXPECT_NEAR(calibrate_sram_noise(0.06), 0.19076, 1e-5);
  EXPECT_NEAR(calibrate_sram_noise(0.08), 0.25676, 1e-5);
}

TEST(Sram, NoiseProfileInterpolates) {
  const auto p = SramNoiseProfile::calibrated();
  EXPECT_DOUBLE_EQ(p.sigma_at({25.0, 1.26}), p.sigma_nominal);
  EXPECT_DOUBLE_EQ(p.sigma_at({-40.0, 1.26}), p.sigma_cold);
  EXPECT_DOUBLE_EQ(p.sigma_at({85.0, 1.26}), p.sigma_hot);
  EXPECT_DOUBLE_EQ(p.sigma_at({25.0, 1.20}), p.sigma_at({25.0, 1.32}));
  const double mid = p.sigma_at({55.0, 1.26});
  EXPECT_GT(mid, p.sigma_nominal);
  EXPECT_LT(mid, p.sigma_hot);
}

TEST(Sram, MonteCarloBerMatchesPopulationModel) {
  // Averaged over many devices the flip rate is atan(sigma) / pi exactly.
  Rng noise(8);
  double flips = 0;
  double total = 0;
  for (std::uint64_t d = 0; d < 40; ++d) {
    const auto puf = SramPuf::create(2048, 900 + d);
    const BitString ref = puf.reference_pattern();
    for (int r = 0; r < 25; ++r) {
      flips += static_cast<double>(hamming_distance(sram_startup(puf, kNominal, &noise), ref));
      total += 2048;
    }
  }
  EXPECT_NEAR(flips / total, 0.06, 0.003);
}

TEST(Sram, ZeroNoiseIsReference) {
  const auto puf = SramPuf::create(300, 2);
  EXPECT_EQ(sram_startup(puf, {85.0, 1.3}, nullptr), puf.reference_pattern());
  const auto quiet = SramPuf::create(300, 2, SramNoiseProfile::flat(0.0));
  Rng noise(1);
  EXPECT_EQ(sram_startup(quiet, kNominal, &noise), quiet.reference_pattern());
}

TEST(Devices, DescriptorRoundTripRebuildsSameDevice) {
  DeviceDescriptor d{"xor-arbiter", {{"n_stages", 32}, {"k", 3}}, 77};
  const nlohmann::json j = d;
  const auto back = j.get<DeviceDescriptor>();
  const auto a = make_device(d);
  const auto b = make_device(back);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const BitString c = rng.bits(32);
    EXPECT_EQ(a->respond(c, kNominal, nullptr), b->respond(c, kNominal, nullptr));
  }
  EXPECT_THROW(make_device({"quantum", {}, 1}), Error);
}

}  // namespace
}  // namespace clonebench
